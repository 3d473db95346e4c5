#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "rigidemt/conformal.hpp"
#include "rigidemt/density.hpp"
#include "rigidemt/elastic.hpp"
#include "rigidemt/emt.hpp"

namespace rigidemt {

// Shape file: {"gamma": <real>, "a": [[re, im], ...]}, a[k] holds a_k from a_0.
ExteriorMap read_shape(const std::string& path);
ExteriorMap parse_shape_json(const std::string& text, const std::string& origin);
std::string shape_to_json(const ExteriorMap& map);

// Material file: {"lambda": <real>, "mu": <real>,
//                 "kappa_convention": "plane_strain" | "plane_stress"}.
// lambda_tilde / mu_tilde keys are accepted and ignored.
LameMaterial read_material(const std::string& path);
LameMaterial parse_material_json(const std::string& text, const std::string& origin);

// 3x3 lattice matrix: either a bare [[..],[..],[..]] array or {"s": [[..]]}.
Eigen::Matrix3d read_s_matrix(const std::string& path);

std::string density_to_json(const DensityCoefficients& dc);

// %.17g, round-trip exact for doubles
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace rigidemt
