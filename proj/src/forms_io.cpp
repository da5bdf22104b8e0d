#include "ncchern/forms_io.hpp"

#include "ncchern/errors.hpp"

#include <cmath>

namespace ncchern {

namespace {

using In = nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ParseError("chern problem: " + where + ": " + what);
}

std::complex<double> scalar_of(const In& v, const std::string& where) {
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    bad(where, "expected a number or [re, im]");
}

CMatrix matrix_of(const In& v, const std::string& where) {
    if (!v.is_array() || v.empty() || !v[0].is_array())
        bad(where, "expected a non-empty array of rows");
    const std::size_t rows = v.size(), cols = v[0].size();
    CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].size() != cols)
            bad(where, "row " + std::to_string(i + 1) + " has the wrong length");
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                scalar_of(v[i][j], where + "[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
    }
    return m;
}

double number_of(const In& v, const std::string& where) {
    if (!v.is_number())
        bad(where, "expected a number");
    return v.get<double>();
}

LieAlgebra lie_of(const In& v, double tol) {
    if (v.is_string()) {
        if (v.get<std::string>() == "so3")
            return LieAlgebra::so3();
        bad("lie_algebra", "unknown name '" + v.get<std::string>() + "' (only \"so3\" is built in)");
    }
    if (!v.is_object() || !v.contains("dim"))
        bad("lie_algebra", "expected \"so3\" or an object with dim and brackets");
    if (!v["dim"].is_number_unsigned())
        bad("lie_algebra.dim", "expected a positive integer");
    const auto dim = v["dim"].get<std::size_t>();
    if (dim == 0 || dim > LieAlgebra::kMaxDim)
        throw ValidationError("lie_algebra.dim must lie in 1.." + std::to_string(LieAlgebra::kMaxDim));
    std::vector<double> c(dim * dim * dim, 0.0);
    std::vector<bool> set(c.size(), false);
    const In brackets = v.value("brackets", In::array());
    if (!brackets.is_array())
        bad("lie_algebra.brackets", "expected an array of [i, j, k, c]");
    for (std::size_t n = 0; n < brackets.size(); ++n) {
        const In& b = brackets[n];
        const std::string where = "lie_algebra.brackets[" + std::to_string(n + 1) + "]";
        if (!b.is_array() || b.size() != 4 || !b[0].is_number_unsigned() || !b[1].is_number_unsigned() ||
            !b[2].is_number_unsigned() || !b[3].is_number())
            bad(where, "expected [i, j, k, c] with 1-based indices");
        const auto i = b[0].get<std::size_t>(), j = b[1].get<std::size_t>(), k = b[2].get<std::size_t>();
        if (i < 1 || j < 1 || k < 1 || i > dim || j > dim || k > dim)
            throw ValidationError(where + ": index out of range 1.." + std::to_string(dim));
        const double value = b[3].get<double>();
        const std::size_t ij = ((i - 1) * dim + (j - 1)) * dim + (k - 1);
        const std::size_t ji = ((j - 1) * dim + (i - 1)) * dim + (k - 1);
        if (set[ij] || set[ji])
            throw ValidationError(where + ": bracket coefficient given twice");
        set[ij] = set[ji] = true;
        c[ij] = value;
        c[ji] = -value;
        if (i == j && value != 0.0)
            throw ValidationError(where + ": [e_i, e_i] must vanish");
    }
    return LieAlgebra(dim, std::move(c), v.value("name", std::string("g")), tol);
}

SmoothAlgebra algebra_of(const In& v, LieAlgebra g, double tol) {
    if (!v.is_object())
        bad("representation", "expected {\"spin\": j} or {\"rho\": [...]}");
    if (v.contains("spin")) {
        const double j = number_of(v["spin"], "representation.spin");
        const LieAlgebra so3 = LieAlgebra::so3();
        bool same = g.dim() == 3;
        for (std::size_t i = 0; same && i < 27; ++i)
            same = g.c(i / 9, (i / 3) % 3, i % 3) == so3.c(i / 9, (i / 3) % 3, i % 3);
        if (!same)
            throw ValidationError("representation.spin needs the so3 brackets [e1,e2] = e3 and cyclic");
        return SmoothAlgebra::spin(j);
    }
    if (!v.contains("rho") || !v["rho"].is_array())
        bad("representation", "expected {\"spin\": j} or {\"rho\": [...]}");
    std::vector<CMatrix> rho;
    for (std::size_t i = 0; i < v["rho"].size(); ++i)
        rho.push_back(matrix_of(v["rho"][i], "representation.rho[" + std::to_string(i + 1) + "]"));
    return SmoothAlgebra(std::move(g), std::move(rho), tol);
}

Json check(const std::string& name, bool ok, double deviation, double tol, const std::string& what) {
    Json c;
    c["name"] = name;
    c["ok"] = ok;
    c["deviation"] = deviation;
    c["tolerance"] = tol;
    c["what"] = what;
    return c;
}

CMatrix unit_matrix(std::size_t n, std::size_t a, std::size_t b) {
    CMatrix e = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    e(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1.0;
    return e;
}

} // namespace

ChernProblem parse_chern_problem(const std::string& text) {
    In doc;
    try {
        doc = In::parse(text);
    } catch (const In::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError("chern problem is not valid JSON", line, col);
    }
    if (!doc.is_object())
        bad("top level", "expected an object");
    static const std::vector<std::string> known{"lie_algebra", "representation", "projection", "trace",
                                                "k_max",       "tolerance",      "identity_tolerance"};
    for (const auto& [key, value] : doc.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            bad("top level", "unknown key '" + key + "'");
    for (const char* key : {"lie_algebra", "representation", "projection"})
        if (!doc.contains(key))
            bad("top level", std::string("missing '") + key + "'");

    const double tol = doc.contains("tolerance") ? number_of(doc["tolerance"], "tolerance") : 1e-12;
    const double id_tol =
        doc.contains("identity_tolerance") ? number_of(doc["identity_tolerance"], "identity_tolerance") : 1e-10;
    if (!(tol > 0.0) || !(id_tol > 0.0))
        throw ValidationError("tolerances must be positive");

    SmoothAlgebra alg = algebra_of(doc["representation"], lie_of(doc["lie_algebra"], tol), tol);

    const In& pj = doc["projection"];
    CMatrix p;
    bool positive_part = false;
    if (pj.is_object()) {
        if (!pj.contains("positive_part"))
            bad("projection", "expected a matrix or {\"positive_part\": hermitian matrix}");
        p = matrix_of(pj["positive_part"], "projection.positive_part");
        positive_part = true;
    } else {
        p = matrix_of(pj, "projection");
    }
    if (p.rows() != static_cast<Eigen::Index>(alg.n()) || p.cols() != p.rows())
        throw ValidationError("projection must be " + std::to_string(alg.n()) + "x" + std::to_string(alg.n()));
    Projection proj = positive_part ? Projection::positive_part(p) : Projection(p, tol);

    double normalization = 1.0;
    std::optional<CMatrix> weight;
    if (doc.contains("trace")) {
        const In& t = doc["trace"];
        if (!t.is_object())
            bad("trace", "expected {\"normalization\": c, \"weight\": matrix}");
        if (t.contains("normalization"))
            normalization = number_of(t["normalization"], "trace.normalization");
        if (t.contains("weight"))
            weight = matrix_of(t["weight"], "trace.weight");
    }
    if (!std::isfinite(normalization))
        throw ValidationError("trace.normalization must be finite");
    TraceFunctional tau = weight ? TraceFunctional(*weight, normalization) : TraceFunctional(alg.n(), normalization);
    if (tau.n() != alg.n())
        throw ValidationError("trace.weight must be " + std::to_string(alg.n()) + "x" + std::to_string(alg.n()));
    tau.validate(alg, tol);

    std::size_t k_max = alg.lie().dim() / 2;
    if (doc.contains("k_max")) {
        if (!doc["k_max"].is_number_unsigned())
            bad("k_max", "expected a nonnegative integer");
        k_max = doc["k_max"].get<std::size_t>();
    }
    return ChernProblem{std::move(alg), std::move(proj), std::move(tau), k_max, tol, id_tol};
}

Json chern_report(const ChernProblem& problem) {
    const SmoothAlgebra& alg = problem.algebra;
    const LieAlgebra& g = alg.lie();
    const std::size_t dim = g.dim(), n = alg.n();
    const CMatrix& p = problem.projection.matrix();
    const double tol = problem.tolerance, id_tol = problem.identity_tolerance;

    Json checks = Json::array();

    // delta_[i,j] = [delta_i, delta_j] on the matrix units.
    double rep = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) {
                    const CMatrix e = unit_matrix(n, a, b);
                    CMatrix lhs = alg.delta(i, alg.delta(j, e)) - alg.delta(j, alg.delta(i, e));
                    for (std::size_t k = 0; k < dim; ++k)
                        lhs -= g.c(i, j, k) * alg.delta(k, e);
                    rep = std::max(rep, lhs.cwiseAbs().maxCoeff());
                }
    checks.push_back(check("delta_representation", rep <= tol, rep, tol,
                           "[delta_i, delta_j] = sum_k c_ij^k delta_k on every matrix unit"));

    const double idem = (p * p - p).cwiseAbs().maxCoeff();
    const double herm = (p - p.adjoint()).cwiseAbs().maxCoeff();
    checks.push_back(check("projection", std::max(idem, herm) <= tol, std::max(idem, herm), tol,
                           "p^2 = p = p*"));

    double inv = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                inv = std::max(inv, std::abs(problem.trace(alg.delta(i, unit_matrix(n, a, b)))));
    checks.push_back(check("trace_invariance", inv <= tol, inv, tol, "tau(delta_i(E_ab)) = 0"));

    const std::vector<Form> ch = chern_character(problem.projection, problem.trace, alg, problem.k_max);

    const double d0 = std::abs(ch[0].value({}) - problem.trace(p));
    checks.push_back(check("degree0_is_tau_p", d0 <= id_tol, d0, id_tol, "degree-0 term equals tau(p)"));

    Json character = Json::array();
    double factorial = 1.0;
    for (std::size_t k = 0; k <= problem.k_max; ++k) {
        if (k > 0)
            factorial *= static_cast<double>(k);
        const CheckResult real = reality_check(problem.projection, problem.trace, alg, k, id_tol);
        checks.push_back(check("reality_k" + std::to_string(k), real.ok, real.deviation, id_tol,
                               "i^k tau(p (dp ^ dp)^k) is real"));
        const CheckResult closed = closedness_check(ch[k], g, id_tol);
        checks.push_back(check("closed_degree" + std::to_string(2 * k), closed.ok, closed.deviation, id_tol,
                               "character cochain of degree " + std::to_string(2 * k) + " is closed"));

        Json comps = Json::array();
        for (std::size_t s = 0; s < ch[k].component_count(); ++s) {
            Json idx = Json::array();
            for (std::size_t i : mask_indices(ch[k].masks()[s]))
                idx.push_back(i + 1);
            const std::complex<double> v = ch[k].component(s)(0, 0);
            comps.push_back({{"indices", std::move(idx)}, {"value", Json::array({v.real(), v.imag()})}});
        }
        Json entry;
        entry["degree"] = 2 * k;
        entry["prefactor"] = k == 0 ? std::string("1") : "(2 pi i)^-" + std::to_string(k) + " / " +
                                                              std::to_string(static_cast<long>(factorial));
        entry["components"] = std::move(comps);
        character.push_back(std::move(entry));
    }

    Json out;
    out["problem"] = {{"lie_algebra", g.name()},
                      {"dim", dim},
                      {"n", n},
                      {"k_max", problem.k_max},
                      {"normalization", problem.trace.normalization()},
                      {"tolerance", tol},
                      {"identity_tolerance", id_tol}};
    out["checks"] = std::move(checks);
    bool all = true;
    for (const auto& c : out["checks"])
        all = all && c["ok"].get<bool>();
    out["all_checks_ok"] = all;
    out["character"] = std::move(character);
    return out;
}

} // namespace ncchern
