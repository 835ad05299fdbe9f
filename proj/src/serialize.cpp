#include "mpf/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "mpf/error.hpp"

namespace mpf {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json box_side(std::span<const double> values) {
  json out = json::array();
  for (double v : values) out.push_back(number_to_json(v));
  return out;
}

std::vector<double> numbers(const json& array) {
  std::vector<double> out;
  for (const json& v : array) out.push_back(number_from_json(v));
  return out;
}

json beta(const BetaPair& p) { return json::array({number_to_json(p.a), number_to_json(p.b)}); }

json tree_config_json(const TreeConfig& c) {
  return {{"lifetime", number_to_json(c.lifetime)}, {"max_depth", c.max_depth}, {"gamma", c.gamma}, {"seed", c.seed}};
}

TreeConfig tree_config_from(const json& doc) {
  TreeConfig c;
  if (doc.contains("lifetime")) c.lifetime = number_from_json(doc.at("lifetime"));
  if (doc.contains("max_depth")) c.max_depth = doc.at("max_depth").get<std::size_t>();
  if (doc.contains("gamma")) c.gamma = doc.at("gamma").get<double>();
  if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

// Node list shared by both tree kinds; `extra` adds per-node fields.
template <typename Extra>
json structure_json(const MondrianTree& tree, Extra extra) {
  const std::vector<NodeId> order = tree.preorder();
  std::unordered_map<NodeId, long> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = static_cast<long>(i);
  auto ref = [&](NodeId id) { return id == kNoNode ? -1L : index.at(id); };
  json nodes = json::array();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const TreeNode& n = tree.node(order[i]);
    json node = {{"id", i},
                 {"parent", ref(n.parent)},
                 {"left", ref(n.left)},
                 {"right", ref(n.right)},
                 {"depth", n.depth},
                 {"time", number_to_json(n.time)},
                 {"count", n.count},
                 {"lower", box_side(n.box.lower())},
                 {"upper", box_side(n.box.upper())}};
    if (!n.is_leaf()) {
      node["cut_dim"] = n.cut_dim;
      node["cut_loc"] = number_to_json(n.cut_loc);
    } else {
      node["points"] = n.points;
    }
    extra(order[i], node);
    nodes.push_back(std::move(node));
  }
  return nodes;
}

void restore_structure(MondrianTree& tree, const json& nodes) {
  if (!nodes.is_array()) throw Error(ErrorCode::kParse, "snapshot 'nodes' must be an array");
  const std::size_t n = nodes.size();
  if (n == 0) return;
  std::vector<NodeId> handle(n);
  for (std::size_t i = 0; i < n; ++i) handle[i] = tree.allocate(TreeNode{});
  auto at = [&](long k) -> NodeId {
    if (k < 0) return kNoNode;
    if (static_cast<std::size_t>(k) >= n) throw Error(ErrorCode::kParse, "snapshot node reference out of range");
    return handle[static_cast<std::size_t>(k)];
  };
  NodeId root = kNoNode;
  for (std::size_t i = 0; i < n; ++i) {
    const json& doc = nodes[i];
    TreeNode& node = tree.node(handle[i]);
    node.parent = at(doc.at("parent").get<long>());
    node.left = at(doc.at("left").get<long>());
    node.right = at(doc.at("right").get<long>());
    if ((node.left == kNoNode) != (node.right == kNoNode)) {
      throw Error(ErrorCode::kParse, "snapshot node " + std::to_string(i) + " has a single child");
    }
    node.depth = doc.at("depth").get<std::size_t>();
    node.time = number_from_json(doc.at("time"));
    node.count = doc.at("count").get<std::size_t>();
    node.box = BoundingBox(numbers(doc.at("lower")), numbers(doc.at("upper")));
    if (node.box.dims() != tree.dims()) throw Error(ErrorCode::kParse, "snapshot box dimensionality mismatch");
    if (!node.is_leaf()) {
      node.cut_dim = doc.at("cut_dim").get<std::size_t>();
      node.cut_loc = number_from_json(doc.at("cut_loc"));
      if (node.cut_dim >= tree.dims()) throw Error(ErrorCode::kParse, "snapshot cut dimension out of range");
    } else if (doc.contains("points")) {
      node.points = doc.at("points").get<std::vector<PointId>>();
    }
    if (node.parent == kNoNode) {
      if (root != kNoNode) throw Error(ErrorCode::kParse, "snapshot has more than one root");
      root = handle[i];
    }
  }
  if (root == kNoNode) throw Error(ErrorCode::kParse, "snapshot has no root");
  tree.set_root(root);
}

template <typename F>
auto parse_guard(const char* what, F f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

json number_to_json(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double number_from_json(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::kParse, "expected a number, got " + value.dump());
}

json tree_to_json(const MpTree& tree) {
  json nodes = structure_json(tree.structure(), [&](NodeId id, json& node) {
    const MptParams& p = tree.params(id);
    node["leaf_type"] = std::string(to_string(tree.leaf_type(id)));
    node["encoding"] = tree.encoding(id);
    node["observed_log_volume"] = number_to_json(p.observed_log_volume);
    node["region_log_volume"] = number_to_json(p.region_log_volume);
    if (!tree.structure().node(id).is_leaf()) {
      node["prior_chi"] = beta(p.prior_chi);
      node["chi"] = beta(p.chi);
    }
    if (p.restricted) {
      node["prior_rho"] = beta(p.prior_rho);
      node["rho"] = beta(p.rho);
    }
  });
  return {{"format", "mpf-tree"},
          {"version", kFormatVersion},
          {"kind", "streaming"},
          {"dims", tree.dims()},
          {"config", tree_config_json(tree.config())},
          {"rng", {{"seed", tree.rng().seed()}, {"state", tree.rng().state()}}},
          {"nodes", std::move(nodes)}};
}

json tree_to_json(const BatchTree& tree) {
  json nodes = structure_json(tree.partition(), [&](NodeId id, json& node) {
    const auto& p = tree.params(id);
    node["mass"] = number_to_json(p.mass);
    if (!tree.partition().node(id).is_leaf()) {
      node["prior"] = beta(p.prior);
      node["posterior"] = beta(p.posterior);
    }
  });
  return {{"format", "mpf-tree"},
          {"version", kFormatVersion},
          {"kind", "batch"},
          {"dims", tree.partition().dims()},
          {"config", tree_config_json(tree.partition().config())},
          {"gamma", tree.gamma()},
          {"nodes", std::move(nodes)}};
}

MpTree streaming_tree_from_json(const json& doc, std::shared_ptr<Matrix> store) {
  return parse_guard("tree snapshot", [&] {
    if (doc.at("kind") != "streaming") throw Error(ErrorCode::kParse, "expected a streaming tree snapshot");
    const std::size_t dims = doc.at("dims").get<std::size_t>();
    MpTree tree(dims, tree_config_from(doc.at("config")), std::move(store));
    restore_structure(tree.mutable_structure(), doc.at("nodes"));
    const json& rng = doc.at("rng");
    tree.rng() = Rng(rng.at("seed").get<std::uint64_t>());
    tree.rng().set_state(rng.at("state").get<std::uint64_t>());
    for (NodeId id : tree.structure().leaves()) {
      for (PointId p : tree.structure().node(id).points) {
        if (p >= tree.structure().points().rows()) throw Error(ErrorCode::kParse, "snapshot point id outside the store");
      }
    }
    tree.refresh_all();
    return tree;
  });
}

BatchTree batch_tree_from_json(const json& doc) {
  return parse_guard("tree snapshot", [&] {
    if (doc.at("kind") != "batch") throw Error(ErrorCode::kParse, "expected a batch tree snapshot");
    const std::size_t dims = doc.at("dims").get<std::size_t>();
    const TreeConfig config = tree_config_from(doc.at("config"));
    MondrianTree partition(std::make_shared<Matrix>(0, dims), dims, config);
    restore_structure(partition, doc.at("nodes"));
    return BatchTree::fit(std::move(partition), doc.value("gamma", config.gamma));
  });
}

json config_to_json(const ForestConfig& config) {
  json out = tree_config_json(config.tree);
  out["n_trees"] = config.n_trees;
  out["kind"] = std::string(to_string(config.kind));
  out["epsilon"] = config.epsilon;
  out["phi"] = config.phi;
  return out;
}

ForestConfig config_from_json(const json& doc) {
  return parse_guard("forest config", [&] {
    ForestConfig c;
    c.tree = tree_config_from(doc);
    if (doc.contains("n_trees")) c.n_trees = doc.at("n_trees").get<std::size_t>();
    if (doc.contains("kind")) c.kind = parse_model_kind(doc.at("kind").get<std::string>());
    if (doc.contains("epsilon")) c.epsilon = doc.at("epsilon").get<double>();
    if (doc.contains("phi")) c.phi = doc.at("phi").get<double>();
    c.validate();
    return c;
  });
}

json forest_to_json(const Forest& forest) {
  json out = {{"format", "mpf-forest"},
              {"version", kFormatVersion},
              {"dims", forest.dims()},
              {"config", config_to_json(forest.config())}};
  json trees = json::array();
  if (forest.kind() == ModelKind::kBatch) {
    for (const BatchTree& t : forest.batch_trees()) trees.push_back(tree_to_json(t));
  } else {
    json points = json::array();
    const Matrix& store = *forest.store();
    for (std::size_t i = 0; i < store.rows(); ++i) points.push_back(box_side(store.row(i)));
    out["points"] = std::move(points);
    for (const MpTree& t : forest.streaming_trees()) trees.push_back(tree_to_json(t));
  }
  out["trees"] = std::move(trees);
  return out;
}

Forest forest_from_json(const json& doc) {
  return parse_guard("forest snapshot", [&] {
    if (doc.value("format", "") != "mpf-forest") throw Error(ErrorCode::kParse, "not a forest snapshot");
    const ForestConfig config = config_from_json(doc.at("config"));
    const std::size_t dims = doc.at("dims").get<std::size_t>();
    if (config.kind == ModelKind::kBatch) {
      std::vector<BatchTree> trees;
      for (const json& t : doc.at("trees")) trees.push_back(batch_tree_from_json(t));
      return Forest::from_batch(config, std::move(trees));
    }
    auto store = std::make_shared<Matrix>(0, dims);
    for (const json& row : doc.at("points")) {
      const std::vector<double> values = numbers(row);
      if (values.size() != dims) throw Error(ErrorCode::kParse, "snapshot point has the wrong dimensionality");
      store->append_row(values);
    }
    std::vector<MpTree> trees;
    for (const json& t : doc.at("trees")) trees.push_back(streaming_tree_from_json(t, store));
    return Forest::from_streaming(config, store, std::move(trees));
  });
}

void save_forest(const std::string& path, const Forest& forest) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << forest_to_json(forest).dump() << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
}

Forest load_forest(const std::string& path) { return forest_from_json(read_json_file(path)); }

}  // namespace mpf
