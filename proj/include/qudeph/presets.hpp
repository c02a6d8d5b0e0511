#pragma once

// Built-in scenario presets, one per shipped figure. The same JSON text is
// mirrored under presets/ for direct editing; `qudeph run <name>` resolves
// built-ins first, then treats the argument as a file path.

#include <string>
#include <utility>
#include <vector>

#include "qudeph/scenario.hpp"

namespace qudeph {

namespace detail {

inline std::string standard_variants() {
  return "  \"zeta_variants\": [[0, 0], [0.15, 0.15], [0.2, 0.2], [0.3, 0.3]],\n";
}

inline std::string fixed_zeta(const std::string& z1, const std::string& z2) {
  return "  \"coupling\": {\"zeta\": [" + z1 + ", " + z2 + "]},\n";
}

inline std::string figure_preset(const std::string& name, const std::string& initial,
                                 const std::string& coupling, int weight,
                                 const std::string& outputs) {
  return std::string("{\n") + "  \"name\": \"" + name + "\",\n  \"d\": 3,\n  \"initial\": " +
         initial + ",\n" + coupling + "  \"weight_index\": " + std::to_string(weight) +
         ",\n  \"t_max\": \"12pi\",\n  \"steps\": 4000,\n  \"outputs\": [" + outputs + "]\n}\n";
}

}  // namespace detail

inline const std::vector<std::pair<std::string, std::string>>& builtin_presets() {
  using detail::figure_preset;
  using detail::fixed_zeta;
  using detail::standard_variants;
  static const std::vector<std::pair<std::string, std::string>> presets = [] {
    std::vector<std::pair<std::string, std::string>> p;
    const auto a0 = [](const std::string& v) { return "{\"a0\": " + v + "}"; };

    p.emplace_back("fig-conj1a", figure_preset("fig-conj1a", a0("0.90"), standard_variants(), 1,
                                               "\"concurrence\""));
    p.emplace_back("fig-conj1b", figure_preset("fig-conj1b", a0("0.99"), standard_variants(), 1,
                                               "\"concurrence\""));
    p.emplace_back("fig-conj1c", figure_preset("fig-conj1c", a0("0.993"), standard_variants(), 1,
                                               "\"concurrence\""));

    const std::vector<std::pair<std::string, std::string>> approach = {
        {"a", "0.994"}, {"b", "0.995"}, {"c", "0.996"}, {"d", "0.997"}, {"e", "1.0"}};
    for (const auto& [tag, v] : approach)
      p.emplace_back("fig-approach-" + tag,
                     figure_preset("fig-approach-" + tag, a0(v), standard_variants(), 1,
                                   "\"concurrence\", \"kink\""));

    p.emplace_back("fig-asy-coef", figure_preset("fig-asy-coef", a0("1.0"), standard_variants(),
                                                 1, "\"effective_coeffs\""));
    p.emplace_back("fig-purity",
                   figure_preset("fig-purity", a0("1.0"), standard_variants(), 1, "\"purity\""));

    const std::vector<std::pair<std::string, std::string>> eig2 = {
        {"a", "0.90"}, {"b", "0.99"}, {"c", "0.993"}};
    for (const auto& [tag, v] : eig2)
      p.emplace_back("fig-eig2-" + tag,
                     figure_preset("fig-eig2-" + tag, a0(v), fixed_zeta("0.3", "0.3"), 1,
                                   "\"eigenvalues\""));
    for (const auto& [tag, v] : approach)
      p.emplace_back("fig-eig6-" + tag,
                     figure_preset("fig-eig6-" + tag, a0(v), fixed_zeta("0.3", "0.3"), 1,
                                   "\"eigenvalues\", \"kink\""));
    const std::vector<std::pair<std::string, std::string>> zoom = {
        {"a", "0.994"}, {"b", "0.995"}, {"c", "0.996"}};
    for (const auto& [tag, v] : zoom)
      p.emplace_back("fig-zoom-" + tag,
                     figure_preset("fig-zoom-" + tag, a0(v), fixed_zeta("0.3", "0.3"), 1,
                                   "\"eigenvalues\", \"kink\""));

    p.emplace_back("fig-geo-a",
                   figure_preset("fig-geo-a", a0("1.0"), standard_variants(), 1, "\"gp\""));
    p.emplace_back("fig-geo-b",
                   figure_preset("fig-geo-b", a0("1.0"), standard_variants(), 3, "\"gp\""));

    p.emplace_back("fig-regions",
                   std::string("{\n  \"name\": \"fig-regions\",\n  \"kind\": \"region-grid\",\n"
                               "  \"z_min\": -0.5,\n  \"z_max\": 0.5,\n  \"z_step\": 0.025\n}\n"));
    return p;
  }();
  return presets;
}

inline const std::string* find_builtin_preset(const std::string& name) {
  for (const auto& [n, text] : builtin_presets())
    if (n == name) return &text;
  return nullptr;
}

}  // namespace qudeph
