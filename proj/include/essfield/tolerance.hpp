#pragma once

#include <cstdlib>
#include <string>

namespace essfield {

// Numeric thresholds shared by all modules. `symmetry` is the one the CLI
// exposes through ESSFIELD_TOL.
struct Tolerances {
    double root = 1e-13;         // relative backward error for root polishing
    double cluster = 1e-7;       // multiplicity clustering, scaled by max(1, max|root|)
    double pole = 1e-12;         // evaluation guard around poles
    double symmetry = 1e-7;      // rotation invariance / barycenter agreement, relative
    double equivalence = 1e-6;   // canonical-form comparison, relative
    double tie = 1e-9;           // tolerant lexicographic comparison
    double exp_overflow = 700.0; // |Re E| beyond this is a range error

    static Tolerances from_env() {
        Tolerances t;
        if (const char* s = std::getenv("ESSFIELD_TOL")) {
            try {
                double v = std::stod(s);
                if (v > 0) t.symmetry = v;
            } catch (...) {
            }
        }
        return t;
    }
};

} // namespace essfield
