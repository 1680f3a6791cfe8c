#pragma once

#include <string>

namespace cpkit {

struct Tolerances {
    double hermiticity = 1e-10;
    double rank = 1e-10;        // relative
    double psd = 1e-9;          // eigenvalue >= -psd counts as PSD
    double feasibility = 1e-8;  // affine residual of an accepted feasible point
    double consistency = 1e-9;  // ||Tr_B(U X U^dag)|| below this is zero
    double witness = 1e-6;      // violations must exceed this to count as witnesses
    double kernel = 1e-9;       // ||Tr_B X|| below this puts X in V0
    double invariant = 1e-9;    // trace preservation, dag-linearity, round trips
    double osr = 1e-8;          // OSR reconstruction

    // Sets a field by name; returns false for unknown names.
    bool set(const std::string& name, double value);
};

inline bool Tolerances::set(const std::string& name, double value) {
    if (name == "hermiticity") hermiticity = value;
    else if (name == "rank") rank = value;
    else if (name == "psd") psd = value;
    else if (name == "feasibility") feasibility = value;
    else if (name == "consistency") consistency = value;
    else if (name == "witness") witness = value;
    else if (name == "kernel") kernel = value;
    else if (name == "invariant") invariant = value;
    else if (name == "osr") osr = value;
    else return false;
    return true;
}

}  // namespace cpkit
