#include "rigidemt/elastic.hpp"

#include "rigidemt/errors.hpp"

namespace rigidemt {

LameMaterial make_material(double lambda, double mu, KappaConvention convention) {
    if (!(mu > 0.0) || !(lambda + mu > 0.0)) {
        throw ValidationError("make_material: need mu > 0 and lambda + mu > 0");
    }
    LameMaterial m;
    m.lambda = lambda;
    m.mu = mu;
    m.convention = convention;
    m.alpha = 0.5 * (1.0 / mu + 1.0 / (2.0 * mu + lambda));
    m.beta = 0.5 * (1.0 / mu - 1.0 / (2.0 * mu + lambda));
    if (convention == KappaConvention::PlaneStrain) {
        m.kappa = (lambda + 3.0 * mu) / (lambda + mu);
    } else {
        const double nu = lambda / (2.0 * (lambda + mu));
        if (!(nu > -1.0)) {
            throw ValidationError("make_material: plane stress requires 3 lambda + 2 mu > 0");
        }
        m.kappa = (3.0 - nu) / (1.0 + nu);
    }
    return m;
}

Loading Loading::canonical(int i) {
    switch (i) {
        case 1: return u1();
        case 2: return u2();
        case 3: return u3();
        default: throw ValidationError("Loading::canonical: index must be 1, 2 or 3");
    }
}

std::string Loading::name() const {
    switch (tag) {
        case Tag::U1: return "U1";
        case Tag::U2: return "U2";
        case Tag::U3: return "U3";
        case Tag::General: return "General";
    }
    return "?";
}

} // namespace rigidemt
