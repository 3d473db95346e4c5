#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rigidemt/density.hpp"
#include "rigidemt/effective.hpp"
#include "rigidemt/emt.hpp"
#include "rigidemt/errors.hpp"
#include "rigidemt/io.hpp"
#include "rigidemt/oracle.hpp"
#include "rigidemt/presets.hpp"
#include "rigidemt/verify.hpp"

using nlohmann::json;
using namespace rigidemt;

namespace {

struct CommonOpts {
    std::string shape;
    std::string material;
    int truncation = 64;
    double tol = 1e-10;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 2024;
    double cell_area = 1.0;
};

ExteriorMap load_shape(const std::string& name_or_path) {
    if (name_or_path.empty()) throw ValidationError("no shape given (use --shape PATH or a preset name)");
    if (std::filesystem::exists(name_or_path)) return read_shape(name_or_path);
    if (auto p = preset_shape(name_or_path)) return *p;
    throw ValidationError("shape \"" + name_or_path + "\" is neither a file nor a preset "
                          "(presets: disk, ellipse, egg, trilobe)");
}

LameMaterial load_material(const std::string& path) {
    if (path.empty()) return make_material(1.0, 1.0);
    return read_material(path);
}

void emit(const CommonOpts& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text << "\n";
    } else {
        write_text_file(c.out, text + "\n");
    }
}

json complex_json(Complex v) { return {v.real(), v.imag()}; }

json matrix_json(const Eigen::Matrix3d& m) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) {
        rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
    }
    return rows;
}

json tensor_json(const EmtTensor& t) {
    json j;
    for (int i = 1; i <= 2; ++i)
        for (int jj = 1; jj <= 2; ++jj)
            for (int k = 1; k <= 2; ++k)
                for (int l = 1; l <= 2; ++l) {
                    j["m" + std::to_string(i) + std::to_string(jj) + "_" + std::to_string(k) +
                      std::to_string(l)] = t.entry(i, jj, k, l);
                }
    return j;
}

int cmd_emt(const CommonOpts& c) {
    const ExteriorMap map = load_shape(c.shape);
    const LameMaterial mat = load_material(c.material);
    const MapReport rep = validate(map);
    if (!rep.accepted) throw ValidationError("shape rejected: " + rep.message);

    SolveOptions opts;
    opts.truncation = c.truncation;
    opts.residual_tol = c.tol;
    const EmtResult res = emt_first_order(map, mat, opts);

    ExteriorMap centered = map;
    if (!centered.a.empty()) centered.a[0] = Complex{0.0, 0.0};
    const int degree = centered.degree();

    if (c.format == "csv") {
        std::ostringstream os;
        os << "entry,value\n";
        const json t = tensor_json(res.tensor);
        for (auto it = t.begin(); it != t.end(); ++it) {
            os << it.key() << "," << format_double(it.value().get<double>()) << "\n";
        }
        emit(c, os.str());
        return 0;
    }

    json j;
    j["shape"] = json::parse(shape_to_json(map));
    j["material"] = {{"lambda", mat.lambda},
                     {"mu", mat.mu},
                     {"alpha", mat.alpha},
                     {"beta", mat.beta},
                     {"kappa", mat.kappa}};
    j["entries"] = tensor_json(res.tensor);
    j["mandel"] = matrix_json(res.tensor.mandel());
    j["voigt"] = matrix_json(res.tensor.voigt());
    json epairs = json::array();
    for (int i = 0; i < 3; ++i) {
        epairs.push_back({{"loading", res.densities[static_cast<size_t>(i)].loading.name()},
                          {"e1", complex_json(res.e[static_cast<size_t>(i)].e1)},
                          {"e2", complex_json(res.e[static_cast<size_t>(i)].e2)}});
    }
    j["e_pairs"] = epairs;
    j["diagnostics"] = {{"identity_residual", res.diag.identity_residual},
                        {"symmetry_residual", res.diag.symmetry_residual},
                        {"alt_m1122_gap", res.diag.alt_m1122_gap},
                        {"epair_quadrature_mismatch", res.diag.epair_quadrature_mismatch},
                        {"max_boundary_residual", res.diag.max_boundary_residual},
                        {"extra_support", res.diag.extra_support},
                        {"window", res.diag.window},
                        {"refinement_delta", res.diag.refinement_delta}};
    if (degree <= 3) {
        const EmtTensor cf = closed_form_emt(map, mat);
        j["closed_form"] = tensor_json(cf);
        double gap = 0.0;
        const double scale = std::max({std::abs(cf.m1111), std::abs(cf.m1212), 1e-300});
        gap = std::max({std::abs(cf.m1111 - res.tensor.m1111),
                        std::abs(cf.m2222 - res.tensor.m2222),
                        std::abs(cf.m1122 - res.tensor.m1122),
                        std::abs(cf.m1112 - res.tensor.m1112),
                        std::abs(cf.m2212 - res.tensor.m2212),
                        std::abs(cf.m1212 - res.tensor.m1212)}) / scale;
        j["closed_form_gap"] = gap;
    } else {
        j["closed_form"] = nullptr;
        j["note"] = "closed forms cover polynomial degree <= 3; this shape has degree " +
                    std::to_string(degree);
    }
    emit(c, j.dump(2));
    return 0;
}

int cmd_density(const CommonOpts& c, const std::string& loading_name) {
    const ExteriorMap map = load_shape(c.shape);
    const LameMaterial mat = load_material(c.material);
    Loading ld = Loading::u1();
    if (loading_name == "U1") ld = Loading::u1();
    else if (loading_name == "U2") ld = Loading::u2();
    else if (loading_name == "U3") ld = Loading::u3();
    else throw ValidationError("--loading must be U1, U2 or U3");

    SolveOptions opts;
    opts.truncation = c.truncation;
    opts.residual_tol = c.tol;
    const DensityCoefficients dc = solve_first_order(map, mat, ld, opts);
    emit(c, density_to_json(dc));
    return 0;
}

int cmd_effective(const CommonOpts& c, const std::string& fractions, const std::string& s_path) {
    const ExteriorMap map = load_shape(c.shape);
    const LameMaterial mat = load_material(c.material);
    std::optional<Eigen::Matrix3d> S;
    if (!s_path.empty()) S = read_s_matrix(s_path);

    SolveOptions opts;
    opts.truncation = c.truncation;
    opts.residual_tol = c.tol;
    const EmtResult res = emt_first_order(map, mat, opts);

    std::vector<double> fs;
    if (fractions.empty()) {
        fs.push_back(volume_fraction(map, c.cell_area));
    } else {
        double start = 0, stop = 0, step = 0;
        if (std::sscanf(fractions.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3 ||
            !(step > 0.0)) {
            throw ValidationError("--fractions must be START:STOP:STEP with positive STEP");
        }
        for (double f = start; f <= stop + 1e-12; f += step) fs.push_back(f);
    }
    for (const double f : fs) {
        if (!(f >= 0.0) || !(f < 1.0)) {
            throw ValidationError("volume fractions must lie in [0, 1)");
        }
    }

    std::ostringstream os;
    os << "f,c11,c12,c13,c22,c23,c33,iso_deviation,status\n";
    for (const double f : fs) {
        os << format_double(f) << ",";
        try {
            const EffectiveTensor et = effective(mat, res.tensor, f, S);
            const Eigen::Matrix3d& m = et.c_star;
            os << format_double(m(0, 0)) << "," << format_double(m(0, 1)) << ","
               << format_double(m(0, 2)) << "," << format_double(m(1, 1)) << ","
               << format_double(m(1, 2)) << "," << format_double(m(2, 2)) << ","
               << format_double(isotropy_deviation(m)) << ",ok\n";
        } catch (const SolverError&) {
            os << ",,,,,,,singular\n";
        }
    }
    emit(c, os.str());
    return 0;
}

int cmd_field(const CommonOpts& c, const std::string& loading_name, const std::string& ring,
              const std::string& grid) {
    const ExteriorMap map = load_shape(c.shape);
    const LameMaterial mat = load_material(c.material);
    Loading ld = Loading::u1();
    if (loading_name == "U2") ld = Loading::u2();
    else if (loading_name == "U3") ld = Loading::u3();
    else if (loading_name != "U1") throw ValidationError("--loading must be U1, U2 or U3");

    SolveOptions opts;
    opts.truncation = c.truncation;
    opts.residual_tol = c.tol;
    const DensityCoefficients dc = solve_first_order(map, mat, ld, opts);
    const SingleLayerSeries sl = single_layer_series(dc, map, mat, opts);

    std::ostringstream os;
    os << "x,y,re_u,im_u,region\n";
    auto emit_exterior = [&](Complex w) {
        const Complex z = map.map(w);
        const Complex u = background_field(map, mat, ld, z) + 0.5 * sl.eval_two_s(w);
        os << format_double(z.real()) << "," << format_double(z.imag()) << ","
           << format_double(u.real()) << "," << format_double(u.imag()) << ",exterior\n";
    };
    auto emit_interior = [&](Complex z) {
        const Complex u = RigidMotions::combination(dc.b1, dc.b2, dc.b3, z);
        os << format_double(z.real()) << "," << format_double(z.imag()) << ","
           << format_double(u.real()) << "," << format_double(u.imag()) << ",interior\n";
    };

    if (!grid.empty()) {
        double x0, x1, y0, y1;
        int nx, ny;
        if (std::sscanf(grid.c_str(), "%lf:%lf:%lf:%lf:%d:%d", &x0, &x1, &y0, &y1, &nx, &ny) != 6 ||
            nx < 1 || ny < 1) {
            throw ValidationError("--grid must be XMIN:XMAX:YMIN:YMAX:NX:NY");
        }
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                const Complex z{x0 + (x1 - x0) * (nx == 1 ? 0.5 : ix / double(nx - 1)),
                                y0 + (y1 - y0) * (ny == 1 ? 0.5 : iy / double(ny - 1))};
                const auto w = map.invert(z);
                if (w.has_value() && std::abs(*w) > map.gamma) {
                    emit_exterior(*w);
                } else {
                    emit_interior(z);
                }
            }
        }
    } else {
        double r = 2.0 * map.gamma;
        int count = 64;
        if (!ring.empty() &&
            (std::sscanf(ring.c_str(), "%lf:%d", &r, &count) != 2 || count < 1)) {
            throw ValidationError("--ring must be RADIUS:COUNT");
        }
        if (!(r > map.gamma)) throw ValidationError("--ring radius must exceed gamma");
        for (int i = 0; i < count; ++i) {
            emit_exterior(std::polar(r, 2.0 * std::numbers::pi * i / count));
        }
    }
    emit(c, os.str());
    return 0;
}

int cmd_verify(const CommonOpts& c, int oracle_modes, bool corrupt_kappa, bool skip_oracle) {
    const LameMaterial mat = load_material(c.material);
    VerifyOptions vo;
    vo.tol = c.tol;
    vo.seed = c.seed;
    vo.corrupt_kappa = corrupt_kappa;
    vo.oracle_modes = oracle_modes;
    vo.with_oracle = !skip_oracle;

    std::vector<CheckResult> checks;
    if (c.shape.empty()) {
        for (const auto& p : presets()) {
            auto chunk = run_verification(p.map, mat, vo);
            for (auto& ck : chunk) ck.name = p.name + "." + ck.name;
            checks.insert(checks.end(), chunk.begin(), chunk.end());
        }
    } else {
        checks = run_verification(load_shape(c.shape), mat, vo);
    }
    emit(c, verification_report_json(checks));
    return all_passed(checks) ? 0 : 1;
}

int cmd_shapes(const CommonOpts& c) {
    json j = json::array();
    for (const auto& p : presets()) {
        j.push_back({{"name", p.name}, {"shape", json::parse(shape_to_json(p.map))}});
    }
    emit(c, j.dump(2));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"elastic moment tensors of rigid planar inclusions from exterior conformal maps"};
    app.require_subcommand(1);

    CommonOpts c;
    std::string loading = "U1";
    std::string fractions, s_path, ring, grid;
    int oracle_modes = 32;
    bool corrupt_kappa = false, skip_oracle = false;

    auto add_common = [&](CLI::App* sub, bool shape_required) {
        auto* o = sub->add_option("--shape", c.shape, "shape JSON file or preset name");
        if (shape_required) o->required();
        sub->add_option("--material", c.material, "material JSON file (default lambda=mu=1)");
        sub->add_option("--truncation", c.truncation, "series truncation order")
            ->default_val(64);
        sub->add_option("--tol", c.tol, "residual / identity tolerance")->default_val(1e-10);
        sub->add_option("--out", c.out, "output path (default stdout)");
        sub->add_option("--format", c.format, "json or csv")->default_val("json");
        sub->add_option("--seed", c.seed, "seed for randomized checks")->default_val(2024);
        sub->add_option("--cell-area", c.cell_area, "unit cell area")->default_val(1.0);
    };

    auto* emt = app.add_subcommand("emt", "first-order elastic moment tensor of a shape");
    add_common(emt, true);

    auto* density = app.add_subcommand("density", "layer-density coefficients of one loading");
    add_common(density, true);
    density->add_option("--loading", loading, "U1, U2 or U3")->default_val("U1");

    auto* effective_cmd = app.add_subcommand("effective", "dilute effective stiffness sweep (CSV)");
    add_common(effective_cmd, true);
    effective_cmd->add_option("--fractions", fractions, "START:STOP:STEP volume fractions");
    effective_cmd->add_option("--s-matrix", s_path, "3x3 lattice matrix JSON file");

    auto* field = app.add_subcommand("field", "displacement samples (CSV)");
    add_common(field, true);
    field->add_option("--loading", loading, "U1, U2 or U3")->default_val("U1");
    field->add_option("--ring", ring, "RADIUS:COUNT circle of w-plane sample points");
    field->add_option("--grid", grid, "XMIN:XMAX:YMIN:YMAX:NX:NY cartesian grid");

    auto* verify = app.add_subcommand("verify", "run the full invariant and oracle battery");
    add_common(verify, false);
    verify->add_option("--oracle-modes", oracle_modes, "collocation mode count")->default_val(32);
    verify->add_flag("--corrupt-kappa", corrupt_kappa,
                     "deliberately mismatch the Kolosov constant (negative test)");
    verify->add_flag("--skip-oracle", skip_oracle, "skip the collocation cross-checks");

    auto* shapes = app.add_subcommand("shapes", "list the bundled preset shapes");
    add_common(shapes, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(emt)) return cmd_emt(c);
        if (app.got_subcommand(density)) return cmd_density(c, loading);
        if (app.got_subcommand(effective_cmd)) return cmd_effective(c, fractions, s_path);
        if (app.got_subcommand(field)) return cmd_field(c, loading, ring, grid);
        if (app.got_subcommand(verify)) return cmd_verify(c, oracle_modes, corrupt_kappa, skip_oracle);
        if (app.got_subcommand(shapes)) return cmd_shapes(c);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const ConsistencyError& e) {
        std::cerr << "internal consistency error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
