#include "resetfpt/models.hpp"

#include "resetfpt/errors.hpp"

#include <cmath>

namespace resetfpt {

MonotoneMap MonotoneMap::feller() {
    MonotoneMap m;
    m.name = "feller";
    m.forward = [](double x) { return 2.0 * std::sqrt(x); };
    m.inverse = [](double y) { return 0.25 * y * y; };
    m.domain_lo = 0.0;
    m.domain_hi = std::numeric_limits<double>::infinity();
    m.drift = [](double) { return 0.25; };
    m.diffusion = [](double x) { return std::sqrt(std::max(x, 0.0)); };
    return m;
}

MonotoneMap MonotoneMap::wright_fisher() {
    MonotoneMap m;
    m.name = "wright_fisher";
    m.forward = [](double x) { return 2.0 * std::asin(std::sqrt(x)); };
    m.inverse = [](double y) {
        const double s = std::sin(0.5 * y);
        return s * s;
    };
    m.domain_lo = 0.0;
    m.domain_hi = 1.0;
    m.drift = [](double x) { return 0.25 - 0.5 * x; };
    m.diffusion = [](double x) { return std::sqrt(std::max(x * (1.0 - x), 0.0)); };
    return m;
}

std::string model_name(const ModelSpec& model) {
    struct Visitor {
        std::string operator()(const DriftedBM&) const { return "bm"; }
        std::string operator()(const OrnsteinUhlenbeck&) const { return "ou"; }
        std::string operator()(const Cir&) const { return "cir"; }
        std::string operator()(const Conjugated& c) const { return c.map.name; }
    };
    return std::visit(Visitor{}, model);
}

std::string kind_name(ProblemKind kind) { return kind == ProblemKind::Fpt ? "fpt" : "fet"; }

bool on_boundary(const ProblemSpec& spec, double position) {
    return position == 0.0 || (is_fet(spec) && position == spec.b);
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

void validate_model(const ModelSpec& model) {
    struct Visitor {
        void operator()(const DriftedBM& m) const {
            require(std::isfinite(m.eta), "eta must be finite");
        }
        void operator()(const OrnsteinUhlenbeck& m) const {
            require(std::isfinite(m.mu) && m.mu > 0.0, "mu must be positive");
            require(std::isfinite(m.sigma) && m.sigma > 0.0, "sigma must be positive");
        }
        void operator()(const Cir& m) const {
            require(std::isfinite(m.mu) && m.mu > 0.0, "mu must be positive");
            require(std::isfinite(m.sigma) && m.sigma > 0.0, "sigma must be positive");
        }
        void operator()(const Conjugated& m) const {
            require(static_cast<bool>(m.map.forward) && static_cast<bool>(m.map.inverse),
                    "conjugating map must provide forward and inverse functions");
            require(m.map.domain_lo <= 0.0 && m.map.domain_hi > 0.0,
                    "conjugating map domain must contain 0");
            require(std::abs(m.map.forward(0.0)) <= 1e-12, "conjugating map must satisfy v(0) = 0");
        }
    };
    std::visit(Visitor{}, model);
}

}  // namespace

ProblemSpec validate(const ProblemSpec& spec) {
    validate_model(spec.model);
    require(std::isfinite(spec.x), "x must be finite");
    require(std::isfinite(spec.x_r), "x_r must be finite");
    if (spec.kind == ProblemKind::Fpt) {
        require(spec.x >= 0.0, "x must be non-negative for a first-passage problem");
        require(spec.x_r >= 0.0, "x_r must be non-negative for a first-passage problem");
    } else {
        require(std::isfinite(spec.b) && spec.b > 0.0, "b must be positive and finite");
        require(spec.x >= 0.0 && spec.x <= spec.b, "x must lie in [0, b]");
        require(spec.x_r > 0.0 && spec.x_r < spec.b, "x_r must lie in (0, b)");
    }
    if (const auto* c = std::get_if<Conjugated>(&spec.model)) {
        const auto& map = c->map;
        require(map.contains(spec.x), "x outside the domain of map '" + map.name + "'");
        require(map.contains(spec.x_r), "x_r outside the domain of map '" + map.name + "'");
        if (spec.kind == ProblemKind::Fet) {
            require(map.contains(spec.b), "b outside the domain of map '" + map.name + "'");
        }
    }
    return spec;
}

}  // namespace resetfpt
