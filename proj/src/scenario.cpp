#include "ctt/scenario.hpp"

#include <cmath>

#include "ctt/errors.hpp"

namespace ctt {

GFunction Scenario::make_g(GFunction::Kind kind, double mu, double beta) const {
    if (kind == GFunction::Kind::Linear) return GFunction::linear(mu);
    const double lo = std::min(band.z - band.y, initial.mean - band.y);
    const double hi = std::max(band.z - band.y, initial.mean - band.y);
    return GFunction::exp_clamped(mu, beta, lo, hi);
}

void Scenario::validate() const {
    types.validate();
    costs.validate();
    if (!(band.l < band.h)) throw InvalidParameterError("comfort band requires l < h");
    if (band.z != band.l && band.z != band.h)
        throw InvalidParameterError("boundary target z must be one of l, h");
    if (initial.mean < band.l || initial.mean > band.h)
        throw InvalidParameterError("initial mean temperature must lie inside the comfort band");
    if (initial.std_dev < 0.0) throw InvalidParameterError("initial std must be nonnegative");
    const bool release = band.z == band.l;
    if (release) {
        if (!(band.z <= band.y && band.y <= initial.mean))
            throw InvalidParameterError("energy release requires z <= y <= initial mean");
    } else {
        if (!(initial.mean <= band.y && band.y <= band.z))
            throw InvalidParameterError("energy absorption requires initial mean <= y <= z");
    }
    if (!(grid.dt > 0.0) || grid.n_steps == 0)
        throw InvalidParameterError("time grid requires dt > 0 and at least one step");
}

}  // namespace ctt
