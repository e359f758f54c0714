#pragma once

#include <map>
#include <string>

#include "molfate/model_io.hpp"
#include "molfate/network.hpp"

namespace testing {

inline molfate::Complex cx(const std::map<molfate::SpeciesIndex, int>& terms) { return molfate::Complex(terms); }

inline molfate::Model bundled(const std::string& name) {
    return molfate::load_model(std::string(MOLFATE_MODEL_DIR) + "/" + name + ".model");
}

inline molfate::AugmentedNetwork augmented(const molfate::Model& m) {
    return molfate::AugmentedNetwork(m.network, *m.schema);
}

/// SIS with rate constants k1, k2.
inline molfate::Model sis(double k1 = 1.0, double k2 = 0.5, double s0 = 0.99, double i0 = 0.01) {
    const std::string text = "species: S, I\nreactions:\n  infect: S + I -> 2I @ " + std::to_string(k1) +
                             "\n  recover: I -> S @ " + std::to_string(k2) +
                             "\nstatuses:\n  S~ = S\n  I~ = I\ntransforms:\n  infect: S~ -> I~ @ 1\n"
                             "  infect: I~ -> I~ @ 1\n  recover: I~ -> S~ @ 1\ninitial:\n  S = " +
                             std::to_string(s0) + "\n  I = " + std::to_string(i0) + "\n";
    return molfate::parse_model(text);
}

}  // namespace testing
