#include "rigidemt/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rigidemt/errors.hpp"

namespace rigidemt {

namespace {
constexpr double kPi = std::numbers::pi;
}

int ExteriorMap::degree() const {
    double scale = std::max(gamma, 1.0);
    for (int m = static_cast<int>(a.size()) - 1; m >= 1; --m) {
        if (std::abs(a[static_cast<size_t>(m)]) > 1e-300 * scale) return m;
    }
    return 0;
}

Complex ExteriorMap::map(Complex w) const {
    Complex acc = w + a_coeff(0);
    Complex wi{1.0, 0.0};
    for (int m = 1; m < static_cast<int>(a.size()); ++m) {
        wi /= w;
        acc += a[static_cast<size_t>(m)] * wi;
    }
    return acc;
}

Complex ExteriorMap::map_derivative(Complex w) const {
    Complex acc{1.0, 0.0};
    Complex wi = 1.0 / w;
    for (int m = 1; m < static_cast<int>(a.size()); ++m) {
        wi /= w;
        acc -= static_cast<double>(m) * a[static_cast<size_t>(m)] * wi;
    }
    return acc;
}

Complex ExteriorMap::boundary_point(double theta) const {
    return map(std::polar(gamma, theta));
}

double ExteriorMap::scale_factor(double theta) const {
    const double h = gamma * std::abs(map_derivative(std::polar(gamma, theta)));
    if (!(h > 0.0)) {
        throw ValidationError("scale_factor: Phi' vanishes on the boundary circle (map not univalent)");
    }
    return h;
}

double ExteriorMap::area() const {
    double s = gamma * gamma;
    for (int m = 1; m < static_cast<int>(a.size()); ++m) {
        const double am = std::abs(a[static_cast<size_t>(m)]);
        s -= m * am * am * std::pow(gamma, -2 * m);
    }
    const double result = kPi * s;
    if (!(result > 0.0)) {
        throw ValidationError("area: nonpositive area, map violates univalence");
    }
    return result;
}

LaurentSeries ExteriorMap::series(int truncation) const {
    LaurentSeries s = LaurentSeries::monomial(1, 1.0, truncation);
    for (int m = 0; m < static_cast<int>(a.size()); ++m) {
        const Complex am = a[static_cast<size_t>(m)];
        if (am != Complex{}) s.set_coeff(-m, am);
    }
    return s;
}

LaurentSeries ExteriorMap::derivative_series(int truncation) const {
    return series(truncation).derivative();
}

std::optional<Complex> ExteriorMap::invert(Complex z) const {
    Complex w = z - a_coeff(0);
    if (std::abs(w) <= gamma) w = std::polar(1.75 * gamma, std::arg(w == Complex{} ? Complex{1.0, 0} : w));
    for (int it = 0; it < 80; ++it) {
        if (std::abs(w) <= gamma * (1.0 + 1e-12)) return std::nullopt;
        const Complex f = map(w) - z;
        if (std::abs(f) < 1e-13 * std::max(1.0, std::abs(z))) return w;
        const Complex d = map_derivative(w);
        if (d == Complex{}) return std::nullopt;
        Complex step = f / d;
        // keep the iterate outside the critical circle
        while (std::abs(w - step) <= gamma && std::abs(step) > 1e-300) step *= 0.5;
        w -= step;
    }
    return std::nullopt;
}

LaurentSeries reciprocal_derivative(const ExteriorMap& map, int truncation) {
    return reciprocal(map.derivative_series(truncation));
}

namespace {

struct Segment {
    double x0, y0, x1, y1;
    int index;
};

bool segments_cross(const Segment& a, const Segment& b) {
    auto orient = [](double ax, double ay, double bx, double by, double cx, double cy) {
        return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
    };
    const double d1 = orient(a.x0, a.y0, a.x1, a.y1, b.x0, b.y0);
    const double d2 = orient(a.x0, a.y0, a.x1, a.y1, b.x1, b.y1);
    const double d3 = orient(b.x0, b.y0, b.x1, b.y1, a.x0, a.y0);
    const double d4 = orient(b.x0, b.y0, b.x1, b.y1, a.x1, a.y1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

} // namespace

MapReport validate(const ExteriorMap& map, int samples) {
    MapReport report;
    if (!(map.gamma > 0.0)) {
        report.accepted = false;
        report.message = "gamma must be positive";
        return report;
    }

    // signed area <= 0 means the boundary image is traversed degenerately;
    // catches folds the self-intersection scan cannot see (e.g. a1 > gamma^2)
    double signed_area = map.gamma * map.gamma;
    for (int m = 1; m < static_cast<int>(map.a.size()); ++m) {
        const double am = std::abs(map.a[static_cast<size_t>(m)]);
        signed_area -= m * am * am * std::pow(map.gamma, -2 * m);
    }
    if (!(signed_area > 0.0)) {
        report.accepted = false;
        report.boundary_simple = false;
        report.message = "nonpositive enclosed area, map is not univalent";
        return report;
    }

    double cond = 0.0;
    for (int m = 1; m < static_cast<int>(map.a.size()); ++m) {
        cond += m * std::abs(map.a[static_cast<size_t>(m)]) * std::pow(map.gamma, -(m + 1));
    }
    report.condition_sum = cond;
    report.sufficient_condition = cond <= 1.0;
    const double thinness = signed_area / (map.gamma * map.gamma);
    if (report.sufficient_condition && cond < 1.0) {
        report.accepted = true;
        report.boundary_simple = true;
        report.message = (cond > 0.95 || thinness < 0.05)
                             ? "accepted with warning: boundary is near degenerate"
                             : "sufficient coefficient condition holds";
        return report;
    }

    // Fallback: sampled self-intersection scan with a uniform grid over
    // segment bounding boxes.
    std::vector<Segment> segs(static_cast<size_t>(samples));
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    Complex prev = map.boundary_point(0.0);
    for (int i = 0; i < samples; ++i) {
        const double t1 = 2.0 * kPi * (i + 1) / samples;
        const Complex next = map.boundary_point(t1);
        segs[static_cast<size_t>(i)] = {prev.real(), prev.imag(), next.real(), next.imag(), i};
        xmin = std::min({xmin, prev.real(), next.real()});
        xmax = std::max({xmax, prev.real(), next.real()});
        ymin = std::min({ymin, prev.imag(), next.imag()});
        ymax = std::max({ymax, prev.imag(), next.imag()});
        prev = next;
    }
    const int grid = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(samples))));
    const double dx = std::max((xmax - xmin) / grid, 1e-300);
    const double dy = std::max((ymax - ymin) / grid, 1e-300);
    std::vector<std::vector<int>> cells(static_cast<size_t>(grid * grid));
    auto cell_range = [&](const Segment& s, int& cx0, int& cx1, int& cy0, int& cy1) {
        cx0 = std::clamp(static_cast<int>((std::min(s.x0, s.x1) - xmin) / dx), 0, grid - 1);
        cx1 = std::clamp(static_cast<int>((std::max(s.x0, s.x1) - xmin) / dx), 0, grid - 1);
        cy0 = std::clamp(static_cast<int>((std::min(s.y0, s.y1) - ymin) / dy), 0, grid - 1);
        cy1 = std::clamp(static_cast<int>((std::max(s.y0, s.y1) - ymin) / dy), 0, grid - 1);
    };
    for (const auto& s : segs) {
        int cx0, cx1, cy0, cy1;
        cell_range(s, cx0, cx1, cy0, cy1);
        for (int cx = cx0; cx <= cx1; ++cx)
            for (int cy = cy0; cy <= cy1; ++cy)
                cells[static_cast<size_t>(cy * grid + cx)].push_back(s.index);
    }
    for (const auto& cell : cells) {
        for (size_t u = 0; u < cell.size(); ++u) {
            for (size_t v = u + 1; v < cell.size(); ++v) {
                const int i = cell[u], j = cell[v];
                const int gap = std::min(std::abs(i - j), samples - std::abs(i - j));
                if (gap <= 1) continue; // adjacent segments share an endpoint
                if (segments_cross(segs[static_cast<size_t>(i)], segs[static_cast<size_t>(j)])) {
                    report.boundary_simple = false;
                    report.intersection = {2.0 * kPi * i / samples, 2.0 * kPi * j / samples};
                    report.accepted = false;
                    report.message = "sampled boundary self-intersects";
                    return report;
                }
            }
        }
    }
    report.boundary_simple = true;
    report.accepted = true;
    report.message = report.sufficient_condition
                         ? "sufficient condition holds (boundary scan also clean)"
                         : "sufficient condition failed, sampled boundary is simple";
    return report;
}

ExteriorMap translated(const ExteriorMap& map, Complex shift) {
    ExteriorMap out = map;
    if (out.a.empty()) out.a.resize(1, Complex{});
    out.a[0] += shift;
    return out;
}

ExteriorMap rotated(const ExteriorMap& map, double phi) {
    // e^{i phi} Phi(e^{-i phi} w): gamma fixed, a_m -> e^{i (m+1) phi} a_m
    ExteriorMap out = map;
    for (int m = 0; m < static_cast<int>(out.a.size()); ++m) {
        out.a[static_cast<size_t>(m)] *= std::polar(1.0, (m + 1) * phi);
    }
    return out;
}

ExteriorMap scaled(const ExteriorMap& map, double t) {
    if (!(t > 0.0)) throw ValidationError("scaled: scale factor must be positive");
    // t Phi(w / t): gamma -> t gamma, a_m -> t^{m+1} a_m
    ExteriorMap out = map;
    out.gamma *= t;
    for (int m = 0; m < static_cast<int>(out.a.size()); ++m) {
        out.a[static_cast<size_t>(m)] *= std::pow(t, m + 1);
    }
    return out;
}

} // namespace rigidemt
