#include "bikecast/model.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "bikecast/error.hpp"

namespace bikecast {

using nlohmann::json;

const char* learner_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::regression_tree: return "tree";
    case LearnerKind::random_forest: return "rf";
    case LearnerKind::lsboost: return "lsboost";
    case LearnerKind::plsr: return "plsr";
  }
  return "unknown";
}

LearnerKind learner_from_name(const std::string& name) {
  if (name == "tree") return LearnerKind::regression_tree;
  if (name == "rf" || name == "random_forest") return LearnerKind::random_forest;
  if (name == "lsboost") return LearnerKind::lsboost;
  if (name == "plsr") return LearnerKind::plsr;
  throw Error(errc::config_invalid, "unknown learner '" + name + "'");
}

Matrix predict(const Model& model, const Matrix& X) {
  Matrix out;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PLSRModel>) {
          m.predict(X, out);
        } else {
          out = Matrix(X.rows, 1);
          m.predict(X, std::span<double>(out.data));
        }
      },
      model);
  return out;
}

const char* model_kind(const Model& model) {
  switch (model.index()) {
    case 0: return "tree";
    case 1: return "rf";
    case 2: return "lsboost";
    case 3: return "plsr";
  }
  return "unknown";
}

namespace {

json params_to_json(const HyperParams& p) {
  return json{{"kind", learner_name(p.kind)},
              {"n_trees", p.n_trees},
              {"mtry", p.mtry},
              {"max_depth", p.max_depth},
              {"min_samples_leaf", p.min_samples_leaf},
              {"shrinkage", p.shrinkage},
              {"n_components", p.n_components},
              {"bootstrap", p.bootstrap},
              {"seed", p.seed}};
}

HyperParams params_from_json(const json& j) {
  HyperParams p;
  p.kind = learner_from_name(j.at("kind").get<std::string>());
  p.n_trees = j.at("n_trees").get<int>();
  p.mtry = j.at("mtry").get<int>();
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  p.shrinkage = j.at("shrinkage").get<double>();
  p.n_components = j.at("n_components").get<int>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

json tree_to_json(const RegressionTree& tree) {
  json nodes = json::array();
  std::vector<int> feature, left, right, n_samples;
  std::vector<double> threshold, value, sse;
  feature.reserve(tree.nodes.size());
  for (const auto& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    sse.push_back(n.sse);
    n_samples.push_back(n.n_samples);
  }
  return json{{"n_features", tree.n_features},
              {"max_depth", tree.params.max_depth},
              {"min_samples_leaf", tree.params.min_samples_leaf},
              {"feature", feature},
              {"threshold", threshold},
              {"left", left},
              {"right", right},
              {"value", value},
              {"sse", sse},
              {"n_samples", n_samples}};
}

RegressionTree tree_from_json(const json& j) {
  RegressionTree tree;
  tree.n_features = j.at("n_features").get<int>();
  tree.params.max_depth = j.at("max_depth").get<int>();
  tree.params.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  auto feature = j.at("feature").get<std::vector<int>>();
  auto threshold = j.at("threshold").get<std::vector<double>>();
  auto left = j.at("left").get<std::vector<int>>();
  auto right = j.at("right").get<std::vector<int>>();
  auto value = j.at("value").get<std::vector<double>>();
  auto sse = j.at("sse").get<std::vector<double>>();
  auto n_samples = j.at("n_samples").get<std::vector<int>>();
  tree.nodes.resize(feature.size());
  for (size_t i = 0; i < feature.size(); ++i) {
    tree.nodes[i] = {feature[i], threshold[i], left[i],     right[i],
                     value[i],   sse[i],       n_samples[i]};
  }
  return tree;
}

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m;
  m.rows = j.at("rows").get<size_t>();
  m.cols = j.at("cols").get<size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) {
    throw Error(errc::malformed_row, "matrix payload size mismatch");
  }
  return m;
}

} // namespace

void save_model(const Model& model, std::ostream& out) {
  json j;
  j["format"] = "bikecast-model";
  j["version"] = 1;
  j["kind"] = model_kind(model);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, RegressionTree>) {
          j["tree"] = tree_to_json(m);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          j["params"] = params_to_json(m.params);
          j["feature_names"] = m.feature_names;
          j["n_features"] = m.n_features;
          json trees = json::array();
          for (const auto& t : m.trees) trees.push_back(tree_to_json(t));
          j["trees"] = std::move(trees);
        } else if constexpr (std::is_same_v<T, BoostModel>) {
          j["params"] = params_to_json(m.params);
          j["feature_names"] = m.feature_names;
          j["n_features"] = m.n_features;
          j["f0"] = m.f0;
          j["shrinkage"] = m.shrinkage;
          json stages = json::array();
          for (const auto& s : m.stages) {
            stages.push_back(json{{"beta", s.beta}, {"inert", s.inert}, {"tree", tree_to_json(s.tree)}});
          }
          j["stages"] = std::move(stages);
        } else {
          j["n_components"] = m.n_components;
          j["x_mean"] = m.x_mean;
          j["y_mean"] = m.y_mean;
          j["weights"] = matrix_to_json(m.weights);
          j["x_loadings"] = matrix_to_json(m.x_loadings);
          j["y_loadings"] = matrix_to_json(m.y_loadings);
          j["coef"] = matrix_to_json(m.coef);
        }
      },
      model);
  out << j.dump() << '\n';
}

Model load_model(std::istream& in) {
  json j = json::parse(in);
  if (j.value("format", "") != "bikecast-model") {
    throw Error(errc::malformed_row, "not a model file");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "tree") {
    return tree_from_json(j.at("tree"));
  }
  if (kind == "rf") {
    ForestModel m;
    m.params = params_from_json(j.at("params"));
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.n_features = j.at("n_features").get<int>();
    for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t));
    return m;
  }
  if (kind == "lsboost") {
    BoostModel m;
    m.params = params_from_json(j.at("params"));
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.n_features = j.at("n_features").get<int>();
    m.f0 = j.at("f0").get<double>();
    m.shrinkage = j.at("shrinkage").get<double>();
    for (const auto& s : j.at("stages")) {
      BoostStage stage;
      stage.beta = s.at("beta").get<double>();
      stage.inert = s.at("inert").get<bool>();
      stage.tree = tree_from_json(s.at("tree"));
      m.stages.push_back(std::move(stage));
    }
    return m;
  }
  if (kind == "plsr") {
    PLSRModel m;
    m.n_components = j.at("n_components").get<int>();
    m.x_mean = j.at("x_mean").get<std::vector<double>>();
    m.y_mean = j.at("y_mean").get<std::vector<double>>();
    m.weights = matrix_from_json(j.at("weights"));
    m.x_loadings = matrix_from_json(j.at("x_loadings"));
    m.y_loadings = matrix_from_json(j.at("y_loadings"));
    m.coef = matrix_from_json(j.at("coef"));
    return m;
  }
  throw Error(errc::malformed_row, "unknown model kind '" + kind + "'");
}

} // namespace bikecast
