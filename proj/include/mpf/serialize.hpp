#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "mpf/batch_tree.hpp"
#include "mpf/forest.hpp"
#include "mpf/streaming_tree.hpp"

namespace mpf {

// Snapshots number nodes in preorder, so equal trees serialize identically
// whatever their arena layout. Non-finite numbers are written as "inf",
// "-inf" or "nan". Derived Polya parameters are written for inspection and
// recomputed from geometry and counts on restore.
nlohmann::json tree_to_json(const MpTree& tree);
nlohmann::json tree_to_json(const BatchTree& tree);
MpTree streaming_tree_from_json(const nlohmann::json& doc, std::shared_ptr<Matrix> store);
BatchTree batch_tree_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const ForestConfig& config);
ForestConfig config_from_json(const nlohmann::json& doc);

nlohmann::json forest_to_json(const Forest& forest);
Forest forest_from_json(const nlohmann::json& doc);

void save_forest(const std::string& path, const Forest& forest);
Forest load_forest(const std::string& path);

// Reads and parses a JSON file; throws io or parse-error.
nlohmann::json read_json_file(const std::string& path);

// Finite doubles as numbers, others as strings.
nlohmann::json number_to_json(double value);
double number_from_json(const nlohmann::json& value);

}  // namespace mpf
