#pragma once

#include <stdexcept>
#include <string>

namespace tricell {

enum class Cutoff { Pair, Product };
enum class Traversal { C01, C18, C08 };

inline const char* to_string(Cutoff c) { return c == Cutoff::Pair ? "pair" : "product"; }
inline const char* to_string(Traversal t) {
    switch (t) {
        case Traversal::C01: return "3c01";
        case Traversal::C18: return "3c18";
        default: return "3c08";
    }
}

inline Cutoff cutoff_from_string(const std::string& s) {
    if (s == "pair") return Cutoff::Pair;
    if (s == "product") return Cutoff::Product;
    throw std::invalid_argument("unknown cutoff mode: " + s);
}

inline Traversal traversal_from_string(const std::string& s) {
    if (s == "3c01") return Traversal::C01;
    if (s == "3c18") return Traversal::C18;
    if (s == "3c08") return Traversal::C08;
    throw std::invalid_argument("unknown traversal: " + s);
}

// Reduced LJ units: epsilon = sigma = mass = 1.
struct Params {
    double epsilon = 1.0;
    double sigma = 1.0;
    double mass = 1.0;
    double nu = 0.072;          // ATM non-additive strength
    double r_c = 2.5;           // cutoff radius
    double dt = 0.004;
    double t_target = 1.0;      // thermostat setpoint
    Cutoff cutoff_mode = Cutoff::Pair;
    Traversal traversal = Traversal::C08;

    void validate() const {
        if (!(r_c > 0.0)) throw std::invalid_argument("Params: r_c must be positive");
        if (!(dt > 0.0)) throw std::invalid_argument("Params: dt must be positive");
        if (nu < 0.0) throw std::invalid_argument("Params: nu must be nonnegative");
    }
};

} // namespace tricell
