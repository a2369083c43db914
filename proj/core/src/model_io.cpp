#include "mpf/model_io.hpp"

#include "mpf/error.hpp"
#include "mpf/models.hpp"
#include "mpf/atomic_write.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace mpf {

using nlohmann::json;

namespace {

json block_to_json(const ParamVector& p, const ParamSegment& s) {
  json arr = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) arr.push_back(p.values()[static_cast<Eigen::Index>(s.offset + i)]);
  return arr;
}

std::size_t require_dim(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0) {
    throw ParseError(std::string("model file: '") + key + "' must be a positive integer");
  }
  return j[key].get<std::size_t>();
}

}  // namespace

ModelPtr make_model(const std::string& kind, std::size_t d, std::size_t extra) {
  if (kind == "ising") return std::make_shared<IsingModel>(d);
  if (kind == "rbm_marginal") return std::make_shared<RbmMarginalModel>(d, extra);
  if (kind == "product_of_t") return std::make_shared<PotModel>(d, extra);
  if (kind == "gaussian_toy") return std::make_shared<GaussianToyModel>(d);
  throw InvalidArgument("unknown model kind '" + kind + "'");
}

std::string model_to_json(const EnergyModel& model, const ParamVector& params) {
  if (!(params.layout() == model.layout())) throw InvalidArgument("parameters do not match model layout");
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = model.kind();
  j["d"] = model.dim();
  if (const auto* rbm = dynamic_cast<const RbmMarginalModel*>(&model)) j["d_hid"] = rbm->hidden_dim();
  if (const auto* pot = dynamic_cast<const PotModel*>(&model)) j["n_filters"] = pot->n_filters();
  for (const auto& s : model.layout().segments()) j[s.name] = block_to_json(params, s);
  if (model.kind() == "ising") {
    const Eigen::MatrixXd sym = IsingModel::symmetrized(params.block("J"));
    json arr = json::array();
    for (Eigen::Index a = 0; a < sym.rows(); ++a)
      for (Eigen::Index b = 0; b < sym.cols(); ++b) arr.push_back(sym(a, b));
    j["J_symmetrized"] = std::move(arr);
  }
  return j.dump(2);
}

ModelWithParams model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("model file: top level must be an object");
  if (j.contains("format_version") && j["format_version"] != kModelFormatVersion) {
    throw ParseError("model file: unsupported format_version");
  }
  if (!j.contains("kind") || !j["kind"].is_string()) throw ParseError("model file: missing 'kind'");
  const auto kind = j["kind"].get<std::string>();
  const auto d = require_dim(j, "d");

  ModelPtr model;
  if (kind == "rbm_marginal") {
    model = make_model(kind, d, require_dim(j, "d_hid"));
  } else if (kind == "product_of_t") {
    model = make_model(kind, d, require_dim(j, "n_filters"));
  } else if (kind == "ising" || kind == "gaussian_toy") {
    model = make_model(kind, d);
  } else {
    throw ParseError("model file: unknown kind '" + kind + "'");
  }

  ParamVector params(model->layout());
  for (const auto& s : model->layout().segments()) {
    if (!j.contains(s.name) || !j[s.name].is_array()) {
      throw ParseError("model file: missing parameter block '" + s.name + "'");
    }
    const auto& arr = j[s.name];
    if (arr.size() != s.size()) {
      throw ParseError("model file: block '" + s.name + "' has " + std::to_string(arr.size()) +
                       " entries, expected " + std::to_string(s.size()));
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!arr[i].is_number()) throw ParseError("model file: non-numeric entry in '" + s.name + "'");
      params.values()[static_cast<Eigen::Index>(s.offset + i)] = arr[i].get<double>();
    }
  }
  if (!params.all_finite()) throw ParseError("model file: parameters must be finite");
  return {std::move(model), std::move(params)};
}

void save_model(const std::filesystem::path& path, const EnergyModel& model, const ParamVector& params) {
  write_file_atomically(path, model_to_json(model, params) + "\n");
}

ModelWithParams load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace mpf
