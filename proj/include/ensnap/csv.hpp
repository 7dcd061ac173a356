#ifndef ENSNAP_CSV_HPP
#define ENSNAP_CSV_HPP

#include <string>
#include <vector>

#include "ensnap/dataset.hpp"

namespace ensnap {

/// Split one comma-separated line into trimmed fields.
std::vector<std::string> split_csv_line(const std::string& line);

/// Load a numeric CSV file. An optional header row is auto-detected by a
/// non-numeric first line. Rows with missing fields (empty, "?", "NA", or a
/// non-finite number) are dropped; any other unparsable field throws with
/// the 1-based line number. The target column is removed from the inputs.
RegressionDataset load_csv(const std::string& path, std::size_t target_column,
                           bool standardize = false);

/// Write a dataset in the same dialect: inputs first, target last column.
void save_csv(const RegressionDataset& data, const std::string& path);

}  // namespace ensnap

#endif
