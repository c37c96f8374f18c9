#include "levyx/model_json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "levyx/errors.hpp"

namespace levyx {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("model config: unknown key \"" + it.key() + "\"");
}

double need(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("model config: missing key \"" + key + "\"");
    if (!j.at(key).is_number()) throw ConfigError("model config: \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

double opt(const json& j, const std::string& key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) throw ConfigError("model config: \"" + key + "\" must be a number");
    return j.at(key).get<double>();
}

Domain parse_domain(const json& j, Domain dflt) {
    if (!j.contains("domain")) return dflt;
    const json& d = j.at("domain");
    reject_unknown(d, {"t", "x"});
    Domain out = dflt;
    if (d.contains("t")) {
        out.t_lo = d.at("t").at(0).get<double>();
        out.t_hi = d.at("t").at(1).get<double>();
    }
    if (d.contains("x")) {
        out.x_lo = d.at("x").at(0).get<double>();
        out.x_hi = d.at("x").at(1).get<double>();
    }
    return out;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

LoadedModel load_model_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model config: parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("model config: expected an object with a \"kind\" key");
    const std::string kind = j.at("kind").get<std::string>();

    LoadedModel out;
    out.kind = kind;
    ModelSpec& m = out.model;

    if (kind == "flat") {
        reject_unknown(j, {"kind", "sigma", "gamma", "lambda", "m", "eta", "domain"});
        const double sigma = need(j, "sigma");
        const double gam = opt(j, "gamma", 0.0);
        const double lam = opt(j, "lambda", 0.0);
        m.a = CoefficientFn::constant(0.5 * sigma * sigma);
        m.gamma = CoefficientFn::constant(gam);
        if (lam > 0.0) {
            GaussianJumpFamily fam;
            fam.lambda = CoefficientFn::constant(lam);
            fam.m = CoefficientFn::constant(opt(j, "m", 0.0));
            fam.delta = CoefficientFn::constant(need(j, "eta"));
            m.jumps = fam;
        }
    } else if (kind == "cev_gauss") {
        reject_unknown(j, {"kind", "delta", "beta", "lambda", "m", "eta", "gamma", "domain"});
        const double delta = need(j, "delta");
        const double beta = need(j, "beta");
        const double w = 2.0 * (beta - 1.0);
        m.a = CoefficientFn::exp_affine(0.0, 0.5 * delta * delta, w);
        m.gamma = CoefficientFn::constant(opt(j, "gamma", 0.0));
        const double lam = opt(j, "lambda", 0.0);
        if (lam > 0.0) {
            GaussianJumpFamily fam;
            fam.lambda = CoefficientFn::exp_affine(0.0, lam, w);
            fam.m = CoefficientFn::constant(opt(j, "m", 0.0));
            fam.delta = CoefficientFn::constant(need(j, "eta"));
            m.jumps = fam;
        }
    } else if (kind == "jdcev") {
        reject_unknown(j, {"kind", "delta", "beta", "b", "c", "domain"});
        const double delta = need(j, "delta");
        const double beta = need(j, "beta");
        const double b = need(j, "b");
        const double c = need(j, "c");
        m.a = CoefficientFn::exp_affine(0.0, 0.5 * delta * delta, 2.0 * beta);
        m.gamma = CoefficientFn::exp_affine(b, c * delta * delta, 2.0 * beta);
    } else if (kind == "nig_cev") {
        reject_unknown(j, {"kind", "alpha", "beta", "delta0", "gamma", "domain"});
        const double alpha = need(j, "alpha");
        const double beta = need(j, "beta");
        const double delta0 = need(j, "delta0");
        const double g = opt(j, "gamma", 0.5); // scale elasticity
        m.a = CoefficientFn::constant(0.0);
        m.gamma = CoefficientFn::constant(0.0);
        m.jumps = LevySymbolFamily::nig(
            alpha, beta, CoefficientFn::exp_affine(0.0, delta0, 2.0 * (g - 1.0)));
    } else if (kind == "exp_eta") {
        reject_unknown(j, {"kind", "beta", "b0", "b1", "c0", "c1", "eps", "lambda", "m",
                           "eta", "domain"});
        const double beta = need(j, "beta");
        const double b0 = need(j, "b0");
        const double b1 = need(j, "b1");
        const double c0 = opt(j, "c0", 0.0);
        const double c1 = opt(j, "c1", 0.0);
        const double eps = opt(j, "eps", 1.0);
        const double lam = need(j, "lambda");
        m.a = CoefficientFn::exp_affine(0.5 * b0 * b0, 0.5 * eps * b1 * b1, beta);
        m.gamma = CoefficientFn::exp_affine(c0, eps * c1, beta);
        GaussianJumpFamily fam;
        fam.lambda = CoefficientFn::exp_affine(lam, eps * lam, beta);
        fam.m = CoefficientFn::constant(need(j, "m"));
        fam.delta = CoefficientFn::constant(need(j, "eta"));
        m.jumps = fam;
    } else {
        throw ConfigError("model config: unknown kind \"" + kind + "\"");
    }
    m.domain = parse_domain(j, Domain{});

    out.canonical = j.dump();
    out.hash = fnv1a(out.canonical);
    return out;
}

LoadedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("model config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model_json(ss.str());
}

} // namespace levyx
