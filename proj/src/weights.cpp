#include "psidocalc/weights.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include "json.hpp"
#endif

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace psido {

using json = nlohmann::json;

WeightFunction WeightFunction::japanese_bracket(int n) {
    if (n < 1) throw std::invalid_argument("weight: n must be >= 1");
    WeightFunction w;
    w.n_ = n;
    w.kind_ = Kind::JapaneseBracket;
    w.mu_ = 1.0;
    w.formal_order_ = 1.0;
    return w;
}

WeightFunction WeightFunction::quasi_homogeneous(int n, std::vector<int> M) {
    if (n < 1 || int(M.size()) != 2 * n)
        throw std::invalid_argument("weight: M must have 2n positive entries");
    for (int m : M)
        if (m < 1) throw std::invalid_argument("weight: M entries must be positive");
    WeightFunction w;
    w.n_ = n;
    w.kind_ = Kind::QuasiHomogeneous;
    w.M_ = std::move(M);
    int mx = *std::max_element(w.M_.begin(), w.M_.end());
    int mn = *std::min_element(w.M_.begin(), w.M_.end());
    w.formal_order_ = double(mx);
    w.mu_ = double(mn) / double(mx);
    return w;
}

WeightFunction WeightFunction::polyhedron(int n, std::vector<std::vector<Rational>> vertices,
                                          Rational mu_formal) {
    if (n < 1) throw std::invalid_argument("weight: n must be >= 1");
    if (vertices.empty()) throw std::invalid_argument("weight: empty vertex set");
    if (mu_formal <= 0) throw std::invalid_argument("weight: formal order must be positive");
    WeightFunction w;
    w.n_ = n;
    w.kind_ = Kind::Polyhedron;
    bool has_zero = false;
    Rational min_len(0);
    bool min_set = false;
    for (const auto& v : vertices) {
        if (int(v.size()) != 2 * n)
            throw std::invalid_argument("weight: vertex dimension mismatch");
        Rational len(0);
        bool zero = true;
        for (const auto& c : v) {
            if (c < 0) throw std::invalid_argument("weight: vertices must be nonnegative");
            len += c;
            if (c != 0) zero = false;
        }
        if (zero) has_zero = true;
        else if (!min_set || len < min_len) {
            min_len = len;
            min_set = true;
        }
    }
    // shallow completeness check only; full completeness is out of scope
    w.structure_ok_ = has_zero && min_set;
    w.formal_order_ = to_double(mu_formal);
    w.mu_ = min_set ? to_double(min_len) / w.formal_order_ : 1.0;
    w.vert_d_.reserve(vertices.size());
    for (const auto& v : vertices) {
        std::vector<double> dv(v.size());
        for (size_t i = 0; i < v.size(); ++i) dv[i] = 2.0 * to_double(v[i]);
        w.vert_d_.push_back(std::move(dv));
    }
    w.vertices_ = std::move(vertices);
    return w;
}

double WeightFunction::eval(Span z) const {
    if (int(z.size()) != 2 * n_) throw std::invalid_argument("weight: dimension mismatch");
    switch (kind_) {
        case Kind::JapaneseBracket: {
            double s = 1.0;
            for (double v : z) s += v * v;
            return std::sqrt(s);
        }
        case Kind::QuasiHomogeneous: {
            double s = 1.0;
            for (size_t j = 0; j < z.size(); ++j) s += std::pow(z[j] * z[j], double(M_[j]));
            return std::pow(s, 0.5 / formal_order_);
        }
        case Kind::Polyhedron: {
            double s = 0.0;
            for (const auto& g : vert_d_) {
                double t = 1.0;
                for (size_t j = 0; j < z.size(); ++j) {
                    if (g[j] != 0.0) t *= std::pow(z[j] * z[j], 0.5 * g[j]);
                }
                s += t;
            }
            return std::pow(s, 0.5 / formal_order_);
        }
    }
    return 1.0;
}

double WeightFunction::partial(int j, Span z) const {
    if (j < 0 || j >= 2 * n_) throw std::invalid_argument("weight: partial index out of range");
    switch (kind_) {
        case Kind::JapaneseBracket: {
            return z[size_t(j)] / eval(z);
        }
        case Kind::QuasiHomogeneous: {
            double s = 1.0;
            for (size_t i = 0; i < z.size(); ++i) s += std::pow(z[i] * z[i], double(M_[i]));
            double ds = 2.0 * double(M_[j]) * std::pow(z[size_t(j)], 2 * M_[j] - 1);
            double p = 0.5 / formal_order_;
            return p * std::pow(s, p - 1.0) * ds;
        }
        case Kind::Polyhedron: {
            // central differences; polyhedron exponents may be fractional
            double h = 1e-5 * (1.0 + std::abs(z[size_t(j)]));
            VecD zp(z.begin(), z.end()), zm(z.begin(), z.end());
            zp[size_t(j)] += h;
            zm[size_t(j)] -= h;
            return (eval(zp) - eval(zm)) / (2.0 * h);
        }
    }
    return 0.0;
}

std::string WeightFunction::json_spec() const {
    json j;
    switch (kind_) {
        case Kind::JapaneseBracket:
            j["kind"] = "japanese_bracket";
            j["n"] = n_;
            break;
        case Kind::QuasiHomogeneous:
            j["kind"] = "quasi_homogeneous";
            j["M"] = M_;
            break;
        case Kind::Polyhedron: {
            j["kind"] = "polyhedron";
            std::vector<std::vector<std::string>> vs;
            for (const auto& v : vertices_) {
                std::vector<std::string> row;
                for (const auto& c : v) row.push_back(rational_str(c));
                vs.push_back(row);
            }
            j["vertices"] = vs;
            j["mu"] = rational_str(Rational(BigInt(std::llround(formal_order_))));
            break;
        }
    }
    return j.dump();
}

WeightFunction WeightFunction::from_json(const std::string& spec, int default_n) {
    json j;
    // accept a bare keyword as shorthand for the bracket weight
    if (spec == "japanese" || spec == "japanese_bracket") {
        return japanese_bracket(default_n);
    }
    j = json::parse(spec);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "japanese_bracket") {
        int n = j.value("n", default_n);
        return japanese_bracket(n);
    }
    if (kind == "quasi_homogeneous") {
        std::vector<int> M = j.at("M").get<std::vector<int>>();
        if (M.size() % 2 != 0) throw std::invalid_argument("weight: M must have 2n entries");
        int n = int(M.size()) / 2;
        return quasi_homogeneous(n, std::move(M));
    }
    if (kind == "polyhedron") {
        std::vector<std::vector<Rational>> verts;
        for (const auto& row : j.at("vertices")) {
            std::vector<Rational> v;
            for (const auto& c : row) {
                if (c.is_string()) v.push_back(rational_parse(c.get<std::string>()));
                else v.push_back(Rational(c.get<long>()));
            }
            verts.push_back(std::move(v));
        }
        Rational mu = j.at("mu").is_string() ? rational_parse(j["mu"].get<std::string>())
                                             : Rational(j["mu"].get<long>());
        if (verts.empty() || verts[0].size() % 2 != 0)
            throw std::invalid_argument("weight: bad vertex table");
        return polyhedron(int(verts[0].size()) / 2, std::move(verts), mu);
    }
    throw std::invalid_argument("weight: unknown kind '" + kind + "'");
}

std::string WeightFunction::describe() const {
    switch (kind_) {
        case Kind::JapaneseBracket: return "<z>";
        case Kind::QuasiHomogeneous: {
            std::ostringstream os;
            os << "(1 + sum z_j^{2M_j})^{1/" << 2.0 * formal_order_ << "}, M = (";
            for (size_t i = 0; i < M_.size(); ++i) os << (i ? "," : "") << M_[i];
            os << ")";
            return os.str();
        }
        case Kind::Polyhedron: return "polyhedron weight";
    }
    return "?";
}

// ---------------------------------------------------------------------------

static double bracket(Span z) { return std::sqrt(1.0 + norm2(z) * norm2(z)); }

static VecD random_point(Rng& rng, int dim, double L) {
    VecD z(size_t(dim), 0.0);
    for (auto& v : z) v = rng.uniform(-L, L);
    return z;
}

struct WeightConstants {
    double temperance, slow_variation, anisotropy;
};

static WeightConstants weight_constants(const WeightProbe& w, double L, int n_samples,
                                        double mu_hint, uint64_t seed) {
    Rng rng(seed);
    int dim = w.dim2n;
    WeightConstants c{0, 0, 0};
    for (int s = 0; s < n_samples; ++s) {
        VecD z = random_point(rng, dim, L);
        VecD zeta = random_point(rng, dim, L);
        double lz = w.eval(z), lzeta = w.eval(zeta);
        VecD d(size_t(dim), 0.0);
        for (size_t i = 0; i < d.size(); ++i) d[i] = z[i] - zeta[i];
        double ratio = lz / (lzeta * bracket(d));
        c.temperance = std::max(c.temperance, ratio);

        // property ii on |zeta - z| <= mu' Lambda(z); the shell fraction stays
        // below mu: at mu' = 1 the bracket's shell ratio is unbounded, any
        // mu' < 1 keeps it finite, so the test probes half the sharp exponent
        double r = norm2(d);
        double cap = 0.5 * mu_hint * lz;
        if (r > cap && r > 0) {
            double t = cap / r * rng.uniform();
            VecD zeta2(size_t(dim), 0.0);
            for (size_t i = 0; i < d.size(); ++i) zeta2[i] = z[i] - d[i] * t;
            double l2 = w.eval(zeta2);
            c.slow_variation = std::max({c.slow_variation, lz / l2, l2 / lz});
        } else {
            c.slow_variation = std::max({c.slow_variation, lz / lzeta, lzeta / lz});
        }

        VecD t(size_t(dim), 0.0), tz(size_t(dim), 0.0);
        for (size_t i = 0; i < t.size(); ++i) {
            t[i] = rng.uniform(-1.0, 1.0);
            tz[i] = t[i] * z[i];
        }
        c.anisotropy = std::max(c.anisotropy, w.eval(tz) / lz);
    }
    return c;
}

WeightCheckReport check_weight(const WeightProbe& w, double box_L, int n_samples,
                               double mu_hint, uint64_t seed) {
    if (n_samples < 100) throw std::invalid_argument("check_weight: n_samples must be >= 100");
    WeightCheckReport rep;
    rep.box_L = box_L;
    rep.n_samples = n_samples;

    auto c1 = weight_constants(w, box_L, n_samples, mu_hint, seed);
    auto c2 = weight_constants(w, box_L, 2 * n_samples, mu_hint, seed + 1);
    auto cbig = weight_constants(w, 2.0 * box_L, n_samples, mu_hint, seed + 2);

    rep.temperance_constant = c2.temperance;
    rep.slow_variation_constant = c2.slow_variation;
    rep.anisotropy_constant = c2.anisotropy;
    rep.temperance_box_growth = cbig.temperance / std::max(c1.temperance, 1e-300);

    auto stable = [](double a, double b) {
        double lo = std::min(a, b), hi = std::max(a, b);
        return std::isfinite(hi) && hi <= lo * 1.10;
    };
    // stability under sample doubling and under box doubling
    rep.pass_temperance = stable(c1.temperance, c2.temperance) && rep.temperance_box_growth < 1.5;
    rep.pass_slow_variation = stable(c1.slow_variation, c2.slow_variation) &&
                              cbig.slow_variation < 1.5 * c1.slow_variation;
    rep.pass_anisotropy = stable(c1.anisotropy, c2.anisotropy) &&
                          cbig.anisotropy < 1.5 * c1.anisotropy;
    return rep;
}

double weight_power_envelope(const WeightFunction& w, double s, Span z, Span zeta) {
    if (s == 0.0) return 1.0;
    VecD d(z.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = z[i] - zeta[i];
    double lz = w.eval(zeta);
    double br = bracket(d);
    if (s >= 0) return std::pow(lz, s) * std::pow(br, s);
    return std::pow(1.0 + lz / br, s);
}

double amplitude_envelope(const WeightFunction& w, double m, double mprime, double rho,
                          unsigned j, Span x, Span y, Span xi) {
    VecD zxi(x.size() + xi.size());
    std::copy(x.begin(), x.end(), zxi.begin());
    std::copy(xi.begin(), xi.end(), zxi.begin() + long(x.size()));
    double lam = w.eval(zxi);
    VecD d(x.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = x[i] - y[i];
    double br = bracket(d);
    return std::pow(lam, m) * std::pow(br, mprime) *
           std::pow(1.0 + lam * std::pow(br, -mprime), -rho * double(j));
}

}  // namespace psido
