#include <doctest.h>

#include "rigidemt/errors.hpp"
#include "rigidemt/io.hpp"
#include "rigidemt/presets.hpp"

using namespace rigidemt;

TEST_CASE("shape json round trip") {
    ExteriorMap m{1.5, {{0.1, -0.2}, {0.3, 0.0}, {0.0, 0.05}}};
    const ExteriorMap back = parse_shape_json(shape_to_json(m), "roundtrip");
    CHECK(back.gamma == m.gamma);
    REQUIRE(back.a.size() == m.a.size());
    for (size_t i = 0; i < m.a.size(); ++i) CHECK(back.a[i] == m.a[i]);
}

TEST_CASE("malformed shape files carry field diagnostics") {
    CHECK_THROWS_WITH_AS(parse_shape_json("{", "x.json"),
                         doctest::Contains("not valid JSON"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_shape_json("{\"a\": []}", "x.json"),
                         doctest::Contains("missing field \"gamma\""), ValidationError);
    CHECK_THROWS_WITH_AS(parse_shape_json("{\"gamma\": -1.0}", "x.json"),
                         doctest::Contains("must be positive"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_shape_json("{\"gamma\": 1.0, \"a\": [[1.0]]}", "x.json"),
                         doctest::Contains("\"a\"[0]"), ValidationError);
    CHECK_THROWS_WITH_AS(parse_shape_json("{\"gamma\": 1.0, \"a\": [[0,0],[\"x\",0]]}", "x.json"),
                         doctest::Contains("\"a\"[1]"), ValidationError);
}

TEST_CASE("material parsing and conventions") {
    const LameMaterial m =
        parse_material_json("{\"lambda\": 2.0, \"mu\": 0.5}", "m.json");
    CHECK(m.lambda == 2.0);
    CHECK(m.mu == 0.5);
    CHECK(m.convention == KappaConvention::PlaneStrain);

    const LameMaterial ps = parse_material_json(
        "{\"lambda\": 1.0, \"mu\": 1.0, \"kappa_convention\": \"plane_stress\"}", "m.json");
    CHECK(ps.convention == KappaConvention::PlaneStress);
    // nu = 0.25 -> kappa = (3 - nu)/(1 + nu) = 2.2
    CHECK(ps.kappa == doctest::Approx(2.2));

    // transmission-style keys are tolerated and ignored
    const LameMaterial t = parse_material_json(
        "{\"lambda\": 1.0, \"mu\": 1.0, \"lambda_tilde\": 9.0, \"mu_tilde\": 9.0}", "m.json");
    CHECK(t.kappa == doctest::Approx(2.0));

    CHECK_THROWS_WITH_AS(parse_material_json("{\"lambda\": 1.0}", "m.json"),
                         doctest::Contains("missing field \"mu\""), ValidationError);
    CHECK_THROWS_WITH_AS(
        parse_material_json("{\"lambda\": 1.0, \"mu\": -1.0}", "m.json"),
        doctest::Contains("mu > 0"), ValidationError);
    CHECK_THROWS_WITH_AS(
        parse_material_json(
            "{\"lambda\": 1.0, \"mu\": 1.0, \"kappa_convention\": \"bogus\"}", "m.json"),
        doctest::Contains("kappa_convention"), ValidationError);
}

TEST_CASE("density dump schema") {
    DensityCoefficients dc;
    dc.loading = Loading::u2();
    dc.c[1] = Complex{0.5, -0.25};
    dc.c[-1] = Complex{1.0, 0.0};
    dc.b1 = 0.1;
    dc.residual = 1e-14;
    const std::string j = density_to_json(dc);
    CHECK(j.find("\"loading\": \"U2\"") != std::string::npos);
    CHECK(j.find("\"-1\"") != std::string::npos);
    CHECK(j.find("\"residual\"") != std::string::npos);
    CHECK(j.find("\"b\"") != std::string::npos);
}

TEST_CASE("17 significant digit formatting round trips") {
    for (const double v : {0.1, 1.0 / 3.0, 2.718281828459045, 1e-17, -3.5e200}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("bundled presets") {
    CHECK(presets().size() == 4);
    CHECK(preset_shape("disk").has_value());
    CHECK(preset_shape("ellipse")->a[1] == Complex{0.5, 0.0});
    CHECK(preset_shape("egg")->a[2] == Complex{0.15, 0.0});
    CHECK(preset_shape("trilobe")->a[3] == Complex{0.2, 0.0});
    CHECK(!preset_shape("hexagon").has_value());
    for (const auto& p : presets()) {
        CHECK(validate(p.map).accepted);
    }
}
