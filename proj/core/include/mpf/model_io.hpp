#pragma once

#include "mpf/model.hpp"

#include <filesystem>
#include <string>

namespace mpf {

inline constexpr int kModelFormatVersion = 1;

/// A model shape together with a parameter vector, as stored in a model file.
struct ModelWithParams {
  ModelPtr model;
  ParamVector params;
};

/// Model JSON:
///   {"format_version": 1, "kind": "ising"|"rbm_marginal"|"product_of_t"|"gaussian_toy",
///    "d": <int>, ["d_hid": <int>] | ["n_filters": <int>],
///    <block name>: [row-major doubles], ...}
/// Ising files also carry "J_symmetrized" on output; it is ignored on input.
std::string model_to_json(const EnergyModel& model, const ParamVector& params);
ModelWithParams model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const EnergyModel& model, const ParamVector& params);
ModelWithParams load_model(const std::filesystem::path& path);

/// Fresh model of the given kind and shape (zero parameters).
ModelPtr make_model(const std::string& kind, std::size_t d, std::size_t extra = 0);

}  // namespace mpf
