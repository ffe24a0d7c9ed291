#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include "momentmix/decomposition.hpp"
#include "momentmix/gmm.hpp"
#include "momentmix/tensor_store.hpp"

namespace momentmix::io {

// All readers throw Error(Parse) on malformed input; file helpers throw
// Error(Parse) when a path cannot be opened.

/// {"d", "m", "entries": [{"key", "re", "im"}]}, keys ascending.
std::string tensor_to_json(const IncompleteSymmetricTensor& t);
/// Rejects keys that are unsorted within themselves, out of order across
/// entries, or duplicated.
IncompleteSymmetricTensor tensor_from_json(const std::string& text);

/// Real moments use the tensor format with im = 0.
std::string moments_to_json(const MomentSet& moments);
MomentSet moments_from_json(const std::string& text);

/// {"d", "m", "r", "components": [{"re": [...], "im": [...]}], "diagnostics"}.
std::string decomposition_to_json(const Decomposition& dec);
/// Same layout without diagnostics; used for planted ground truth.
std::string components_to_json(const ComponentList& comps, int m);
/// Reads either layout. Weights are folded in as w^(1/m) when present.
ComponentList components_from_json(const std::string& text, int* order = nullptr);

/// {"r", "weights", "means": [[...] per component], "variances": [[...]]}.
std::string model_to_json(const GmmModel& model);
GmmModel model_from_json(const std::string& text);

/// N rows, d columns, no header.
std::string samples_to_csv(const Eigen::MatrixXd& data);
Eigen::MatrixXd samples_from_csv(const std::string& text);

/// One integer per line.
std::string labels_to_csv(const std::vector<int>& labels);
std::vector<int> labels_from_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Shortest text that reads back to the same double.
std::string format_double(double value);

}  // namespace momentmix::io
