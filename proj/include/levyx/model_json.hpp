#pragma once

#include <string>

#include "levyx/model.hpp"

namespace levyx {

struct LoadedModel {
    ModelSpec model;
    std::string kind;
    std::string canonical; // canonical JSON dump, hashed for CSV provenance
    std::uint64_t hash = 0;
};

// Parse a model document.  Schemas (unknown keys rejected):
//   {"kind":"flat",    "sigma":0.2, "gamma":0, "lambda":0, "m":0, "eta":0.1}
//   {"kind":"cev_gauss","delta":0.2,"beta":0.5,"lambda":0.3,"m":-0.1,"eta":0.4}
//   {"kind":"jdcev",   "delta":0.3,"beta":-0.3333333,"b":0.01,"c":2}
//   {"kind":"nig_cev", "alpha":40,"beta":-10,"delta0":2.0,"gamma":0.5}
//   {"kind":"exp_eta", "beta":-2,"b0":0.15,"b1":0.15,"c0":0,"c1":0,
//                      "eps":1,"lambda":0.2,"m":-0.2,"eta":0.2}
// plus an optional "domain": {"t":[lo,hi], "x":[lo,hi]} on any kind.
LoadedModel load_model_json(const std::string& text);

LoadedModel load_model_file(const std::string& path);

} // namespace levyx
