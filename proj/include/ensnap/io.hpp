#ifndef ENSNAP_IO_HPP
#define ENSNAP_IO_HPP

#include <string>

#include "ensnap/cube.hpp"
#include "ensnap/mlp.hpp"
#include "ensnap/resample.hpp"

namespace ensnap {

/// Binary snapshot file: magic "ENSNAPSS", version, dimensions, epoch list,
/// per-snapshot training losses, then each snapshot's scalars in field order
/// (hidden_weights, hidden_biases, output_weights, output_bias). All
/// integers and doubles little-endian, 64-bit floats. Round-trips bit-exact.
void save_snapshot_store(const SnapshotStore& store, const std::string& path);
SnapshotStore load_snapshot_store(const std::string& path);

/// Binary cube file: magic "ENSNAPPC", version, M, T, P, flags (bit 0 set
/// when oob weights follow), targets, values, optional weights.
void save_cube(const PredictionCube& cube, const std::string& path);
PredictionCube load_cube(const std::string& path);

/// One line per net: `net_index tau weight`.
void save_selection(const Selection& sel, const std::string& path);
Selection load_selection(const std::string& path);

/// One line per net: the space-separated bootstrap draw.
void save_bootstrap_plan(const BootstrapPlan& plan, const std::string& path);
BootstrapPlan load_bootstrap_plan(const std::string& path,
                                  std::size_t data_size);

}  // namespace ensnap

#endif
