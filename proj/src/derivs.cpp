#include "ymflow/derivs.hpp"

#include <cmath>
#include <sstream>

namespace ymflow {

CoeffTables build_coeff_tables(int n_max) {
    if (n_max < 1) throw std::invalid_argument("build_coeff_tables: n_max >= 1");
    CoeffTables t;
    t.n_max = n_max;
    auto blank = [n_max](int shrink) {
        std::vector<std::vector<long long>> v(n_max + 1);
        for (int n = 0; n <= n_max; ++n) v[n].assign(std::max(0, n - shrink) + 1, 0);
        return v;
    };
    t.c = blank(1);
    t.cbar = blank(1);
    t.ctilde = blank(2);
    t.chat = blank(1);

    // c_{(k+1)1} = 1 + c_{k1}, c_{(k+1)i} = c_{k(i-1)} + c_{ki}; same shape
    // for cbar. Row 1 is empty (first-order terms vanish).
    for (int k = 1; k + 1 <= n_max; ++k) {
        for (int i = 1; i <= k; ++i) {
            long long base = (i == 1) ? 1 : 0;
            t.c[k + 1][i] = base + t.get(t.c, k, i - 1) + t.get(t.c, k, i);
            t.cbar[k + 1][i] = base + t.get(t.cbar, k, i - 1) + t.get(t.cbar, k, i);
        }
    }
    // R seeds one order later: rows 1 and 2 stay empty, the [A' -| A'] term
    // at order 2 vanishes identically.
    for (int k = 2; k + 1 <= n_max; ++k) {
        for (int i = 1; i <= k - 1; ++i) {
            long long base = (i == 1) ? 1 : 0;
            t.ctilde[k + 1][i] = base + t.get(t.ctilde, k, i - 1) + t.get(t.ctilde, k, i);
        }
    }
    for (int n = 2; n <= n_max; ++n)
        for (int i = 1; i <= n - 1; ++i) t.chat[n][i] = t.c[n][i] + t.c[n][n - i];
    return t;
}

LeibnizTables leibniz_oracle(int n_max) {
    using Dict = std::map<std::array<int, 2>, long long>;
    LeibnizTables o;
    o.P.assign(n_max + 1, {});
    o.Q.assign(n_max + 1, {});
    o.R.assign(n_max + 1, {});
    o.S.assign(n_max + 1, {});

    auto differentiate = [](const Dict& d) {
        Dict out;
        for (auto& [key, v] : d) {
            out[{key[0] + 1, key[1]}] += v;
            out[{key[0], key[1] + 1}] += v;
        }
        return out;
    };

    for (int k = 1; k < n_max; ++k) {
        // P_{k+1} = [A' ^ A^(k)] + P_k'
        o.P[k + 1] = differentiate(o.P[k]);
        o.P[k + 1][{1, k}] += 1;
        // Q_{k+1} = [A' -| B^(k-1)] + Q_k'
        o.Q[k + 1] = differentiate(o.Q[k]);
        o.Q[k + 1][{1, k - 1}] += 1;
        // R_{k+1} = [A' -| A^(k)] + R_k', except the order-2 seed [A' -| A']
        // which vanishes identically
        o.R[k + 1] = differentiate(o.R[k]);
        if (k >= 2) o.R[k + 1][{1, k}] += 1;
    }
    // S_{n+1} = S_n' + [B^(n) ^ A'], S_1 = [B ^ A']
    if (n_max >= 1) o.S[1][{0, 1}] = 1;
    for (int k = 1; k < n_max; ++k) {
        o.S[k + 1] = differentiate(o.S[k]);
        o.S[k + 1][{k, 1}] += 1;
    }
    return o;
}

bool tables_match_oracle(const CoeffTables& t, const LeibnizTables& o, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    auto lookup = [](const std::map<std::array<int, 2>, long long>& d, int i, int j) {
        auto it = d.find({i, j});
        return it == d.end() ? 0LL : it->second;
    };
    for (int n = 1; n <= t.n_max; ++n) {
        long long keysum = 0;
        for (int i = 1; i <= n - 1; ++i) {
            if (t.get(t.c, n, i) != lookup(o.P[n], i, n - i))
                return fail("c[" + std::to_string(n) + "][" + std::to_string(i) + "]");
            if (t.get(t.cbar, n, i) != lookup(o.Q[n], i, n - 1 - i))
                return fail("cbar[" + std::to_string(n) + "][" + std::to_string(i) + "]");
            if (t.get(t.ctilde, n, i) != lookup(o.R[n], i, n - i))
                return fail("ctilde[" + std::to_string(n) + "][" + std::to_string(i) + "]");
            if (t.get(t.chat, n, i) != lookup(o.S[n], i, n - i))
                return fail("chat[" + std::to_string(n) + "][" + std::to_string(i) + "]");
            keysum += t.get(t.c, n, i) + t.get(t.cbar, n, i) + t.get(t.ctilde, n, i) +
                      t.get(t.chat, n, i);
        }
        if (n >= 1 && lookup(o.S[n], 0, n) != 1)
            return fail("S[" + std::to_string(n) + "] curvature term");
        // no oracle keys outside the table ranges
        long long osum = 0;
        for (auto& [k, v] : o.P[n]) osum += v;
        for (auto& [k, v] : o.Q[n]) osum += v;
        for (auto& [k, v] : o.R[n]) osum += v;
        for (auto& [k, v] : o.S[n]) osum += v;
        if (osum != keysum + 1 && !(n == 0))  // +1 for the S curvature term
            return fail("stray oracle terms at order " + std::to_string(n));
    }
    return true;
}

const FormField& DerivStack::A_deriv(int k) const {
    if (k < 1 || k > depth()) throw std::invalid_argument("DerivStack: A order out of range");
    return dA[k - 1];
}

const FormField& DerivStack::B_deriv(int k) const {
    if (k < 0 || k >= static_cast<int>(dB.size()))
        throw std::invalid_argument("DerivStack: B order out of range");
    return dB[k];
}

namespace {

FormField eval_P(int n, const DerivStack& st, const CoeffTables& tbl) {
    FormField out(2, st.A.grid(), st.A.group());
    if (st.A.group().abelian()) return out;
    for (int i = 1; i <= n - 1; ++i) {
        long long cc = tbl.get(tbl.c, n, i);
        if (cc == 0) continue;
        FormField term = bracket_wedge(st.A_deriv(i), st.A_deriv(n - i));
        add_scaled(out, term, static_cast<double>(cc));
    }
    return out;
}

FormField eval_Q(int n, const DerivStack& st, const CoeffTables& tbl, bool hat) {
    FormField out(1, st.A.grid(), st.A.group());
    if (st.A.group().abelian()) return out;
    int top = hat ? n - 2 : n - 1;
    for (int i = 1; i <= top; ++i) {
        long long cc = tbl.get(tbl.cbar, n, i);
        if (cc == 0) continue;
        FormField term = interior_bracket(st.A_deriv(i), st.B_deriv(n - 1 - i));
        add_scaled(out, term, static_cast<double>(cc));
    }
    return out;
}

FormField eval_R(int n, const DerivStack& st, const CoeffTables& tbl) {
    FormField out(0, st.A.grid(), st.A.group());
    if (st.A.group().abelian()) return out;
    for (int i = 1; i <= n - 2; ++i) {
        long long cc = tbl.get(tbl.ctilde, n, i);
        if (cc == 0) continue;
        FormField term = interior_bracket(st.A_deriv(i), st.A_deriv(n - i));
        add_scaled(out, term, static_cast<double>(cc));
    }
    return out;
}

FormField eval_S(int n, const DerivStack& st, const CoeffTables& tbl) {
    FormField out(3, st.A.grid(), st.A.group());
    if (n == 0 || st.A.group().abelian()) return out;
    out += bracket_wedge(st.B_deriv(0), st.A_deriv(n));
    for (int i = 1; i <= n - 1; ++i) {
        long long cc = tbl.get(tbl.chat, n, i);
        if (cc == 0) continue;
        FormField bp = st.B_deriv(i);
        bp -= st.P_cache.at(i - 1);
        FormField term = bracket_wedge(bp, st.A_deriv(n - i));
        add_scaled(out, term, static_cast<double>(cc));
    }
    return out;
}

}  // namespace

FormField eval_lower_order(LowerOrderKind kind, int n, const DerivStack& st,
                           const CoeffTables& tbl) {
    if (n < 0) throw std::invalid_argument("eval_lower_order: negative order");
    switch (kind) {
        case LowerOrderKind::P:
            if (n - 1 > st.depth()) throw std::invalid_argument("eval P: stack too shallow");
            return eval_P(n, st, tbl);
        case LowerOrderKind::Q:
            if (n - 1 > st.depth()) throw std::invalid_argument("eval Q: stack too shallow");
            return eval_Q(n, st, tbl, false);
        case LowerOrderKind::Qhat:
            if (n - 2 > st.depth()) throw std::invalid_argument("eval Qhat: stack too shallow");
            return eval_Q(n, st, tbl, true);
        case LowerOrderKind::R:
            if (n - 1 > st.depth()) throw std::invalid_argument("eval R: stack too shallow");
            return eval_R(n, st, tbl);
        case LowerOrderKind::S:
            if (n > st.depth()) throw std::invalid_argument("eval S: stack too shallow");
            return eval_S(n, st, tbl);
    }
    throw std::logic_error("eval_lower_order: bad kind");
}

DerivStack compute_derivative_stack(const Connection& A, int n_max, const CoeffTables& tbl) {
    if (n_max < 1) throw std::invalid_argument("compute_derivative_stack: n_max >= 1");
    if (tbl.n_max < n_max) throw std::invalid_argument("compute_derivative_stack: tables too small");
    DerivStack st;
    st.A = A;
    st.dB.push_back(curvature(A));
    for (int k = 1; k <= n_max; ++k) {
        FormField Qk = eval_Q(k, st, tbl, false);
        st.Q_cache.push_back(Qk);
        FormField Ak = covariant_codifferential(A, st.B_deriv(k - 1));
        Ak *= -1.0;
        Ak -= Qk;
        if (!Ak.finite()) throw FlowBlowup(st.t, k, std::nan(""));
        st.dA.push_back(std::move(Ak));
        FormField Pk = eval_P(k, st, tbl);
        FormField Bk = covariant_d(A, st.A_deriv(k));
        Bk += Pk;
        st.P_cache.push_back(std::move(Pk));
        if (!Bk.finite()) throw FlowBlowup(st.t, k, std::nan(""));
        st.dB.push_back(std::move(Bk));
    }
    return st;
}

IdentityResiduals identity_residuals(const DerivStack& st, int n, const CoeffTables& tbl) {
    if (n < 1 || n > st.depth()) throw std::invalid_argument("identity_residuals: bad order");
    IdentityResiduals r;
    const double h = st.A.grid().h;

    FormField lhs1 = covariant_codifferential(st.A, st.A_deriv(n));
    lhs1 += eval_R(n, st, tbl);
    r.codiff_abs = l2_norm(lhs1);
    r.codiff_rel = r.codiff_abs * h / std::max(l2_norm(st.A_deriv(n)), 1e-300);

    FormField lhs2 = covariant_d(st.A, st.B_deriv(n));
    lhs2 -= eval_S(n, st, tbl);
    r.d_abs = l2_norm(lhs2);
    r.d_rel = r.d_abs * h / std::max(l2_norm(st.B_deriv(n)), 1e-300);
    return r;
}

XY xy_terms(const DerivStack& st, int n, const GfsConstants& k, const CoeffTables& tbl) {
    if (n < 0 || n > st.depth()) throw std::invalid_argument("xy_terms: insufficient stack depth");
    XY xy;
    const double k2 = k.kappa * k.kappa;
    if (n >= 1) {
        double p = l2_norm(st.P_cache.at(n - 1));
        double qh = lp_norm(eval_Q(n + 1, st, tbl, true), 1.2);
        double rr = l2_norm(eval_R(n, st, tbl));
        xy.X = p * p + 2.0 * k2 * qh * qh + rr * rr;
    }
    double q = l2_norm(eval_Q(n + 1, st, tbl, false));
    double p65 = lp_norm(eval_P(n + 1, st, tbl), 1.2);
    double s = l2_norm(eval_S(n, st, tbl));
    xy.Y = q * q + k2 * p65 * p65 + s * s;
    return xy;
}

double gronwall_cn(int n, const GfsConstants& k, const GroupSpec& g, const CoeffTables& tbl) {
    double cbar = static_cast<double>(tbl.get(tbl.cbar, n + 1, n));
    double cnp = 2.0 * g.c_nonabelian * cbar;
    double k6 = std::pow(k.kappa, 6.0);
    return 0.25 * std::pow(1.5, 3.0) * k6 * std::pow(cnp, 4.0);
}

std::string deriv_col(char which, int n, const std::string& suffix) {
    if (which == 'B' && n == 0) {
        if (suffix == "L2") return "B_L2";
        if (suffix == "L6") return "B_L6";
        return "B0_" + suffix;
    }
    return std::string(1, which) + std::to_string(n) + "_" + suffix;
}

namespace {

std::vector<double> series_col(const FlowSeries& s, char which, int n,
                               const std::string& suffix) {
    std::string name = deriv_col(which, n, suffix);
    if (which == 'A' && n == 1 && suffix == "L2") {
        // A1_L2 equals Aprime_L2; prefer the stack column when present
        for (auto& c : s.cols)
            if (c == name) return s.column(name);
        return s.column("Aprime_L2");
    }
    return s.column(name);
}

std::size_t row_at(const FlowSeries& s, double t) {
    auto ts = s.times();
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (std::abs(ts[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
    throw std::invalid_argument("theorem_quantities: t is not a recorded time");
}

std::vector<double> squared(std::vector<double> v) {
    for (auto& x : v) x *= x;
    return v;
}

}  // namespace

TheoremQuantities theorem_quantities(const FlowSeries& s, int n, double t) {
    if (n < 0) throw std::invalid_argument("theorem_quantities: n >= 0");
    TheoremQuantities q;
    auto ts = s.times();
    std::size_t i = row_at(s, t);
    const double em = 2.0 * n - 0.5, ep = 2.0 * n + 0.5;

    auto weighted_at = [&](char which, int order, const std::string& suffix, double expo) {
        auto col = squared(series_col(s, which, order, suffix));
        return std::pow(t, expo) * col[i];
    };
    auto integral_of = [&](char which, int order, const std::string& suffix, double expo) {
        auto col = squared(series_col(s, which, order, suffix));
        return weighted_integral(ts, col, expo, t);
    };

    if (n >= 1) {
        q.An = {weighted_at('A', n, "L2", em), integral_of('B', n, "L2", em)};
        q.Bn = {weighted_at('B', n - 1, "L6", em), integral_of('A', n, "L6", em)};
        q.En = {weighted_at('B', n - 1, "H1A", em), integral_of('A', n, "H1A", em)};
        q.Dn = {weighted_at('A', n, "L6", ep), integral_of('B', n, "L6", ep)};
        q.Fn = {weighted_at('A', n, "H1A", ep), integral_of('B', n, "H1A", ep)};
    }
    // only the B-family row extends to n = 0
    q.Cn = {weighted_at('B', n, "L2", ep), integral_of('A', n + 1, "L2", ep)};
    return q;
}

GronwallReport gronwall_check(const FlowSeries& s, int n, const GfsConstants& k, double c_n) {
    GronwallReport rep;
    rep.n = n;
    auto ts = s.times();
    auto a_n = (n >= 1) ? squared(series_col(s, 'A', n, "L2")) : std::vector<double>();
    auto b_n = squared(series_col(s, 'B', n, "L2"));
    auto a_np1 = squared(series_col(s, 'A', n + 1, "L2"));
    auto xcol = (n >= 1) ? s.column("X" + std::to_string(n)) : std::vector<double>();
    auto ycol = s.column("Y" + std::to_string(n));

    rep.min_margin_a = 1.0;
    rep.min_margin_b = 1.0;
    for (std::size_t i = 1; i < ts.size(); ++i) {
        double t = ts[i];
        if (!(t > 0.0)) continue;
        rep.t.push_back(t);
        PsiPair psi = psi_functions(s, t, k, c_n);
        if (n >= 1) {
            double lhs = std::pow(t, 2.0 * n - 0.5) * a_n[i] +
                         weighted_integral(ts, b_n, 2.0 * n - 0.5, t);
            double rhs = std::exp(psi.psi_n) *
                         ((2.0 * n - 0.5) * weighted_integral(ts, a_n, 2.0 * n - 1.5, t) +
                          weighted_integral(ts, xcol, 2.0 * n - 0.5, t));
            double margin = (rhs > 0.0) ? (rhs - lhs) / rhs : (lhs > 0.0 ? -1.0 : 0.0);
            rep.lhs_a.push_back(lhs);
            rep.rhs_a.push_back(rhs);
            rep.margin_a.push_back(margin);
            rep.min_margin_a = std::min(rep.min_margin_a, margin);
        }
        double lhs = std::pow(t, 2.0 * n + 0.5) * b_n[i] +
                     weighted_integral(ts, a_np1, 2.0 * n + 0.5, t);
        double rhs = std::exp(psi.psi) *
                     ((2.0 * n + 0.5) * weighted_integral(ts, b_n, 2.0 * n - 0.5, t) +
                      weighted_integral(ts, ycol, 2.0 * n + 0.5, t));
        double margin = (rhs > 0.0) ? (rhs - lhs) / rhs : (lhs > 0.0 ? -1.0 : 0.0);
        rep.lhs_b.push_back(lhs);
        rep.rhs_b.push_back(rhs);
        rep.margin_b.push_back(margin);
        rep.min_margin_b = std::min(rep.min_margin_b, margin);
    }
    return rep;
}

std::vector<BoundCheck> lower_order_bound_check(const DerivStack& st, int n,
                                                const CoeffTables& tbl) {
    if (n < 1 || n > st.depth())
        throw std::invalid_argument("lower_order_bound_check: bad order");
    const double c = st.A.group().c_nonabelian;
    const double c2 = c * c;

    auto rowstats = [&](const std::vector<std::vector<long long>>& t, int order, int top) {
        double sum = 0.0, mx = 0.0;
        for (int i = 1; i <= top; ++i) {
            double v = static_cast<double>(tbl.get(t, order, i));
            sum += v;
            mx = std::max(mx, v);
        }
        return std::pair<double, double>(sum, mx);
    };
    auto l2 = [&](const FormField& f) { return l2_norm(f); };
    auto l6 = [&](const FormField& f) { return lp_norm(f, 6.0); };
    auto a2 = [&](int i) { return l2(st.A_deriv(i)); };
    auto a6 = [&](int i) { return l6(st.A_deriv(i)); };
    auto b2 = [&](int i) { return l2(st.B_deriv(i)); };
    auto b6 = [&](int i) { return l6(st.B_deriv(i)); };

    std::vector<BoundCheck> out;
    auto push = [&](const std::string& name, double lhs, double rhs) {
        out.push_back({name, lhs, rhs, lhs <= rhs * (1.0 + 1e-12) + 1e-300});
    };

    // Each d combines: Cauchy-Schwarz over the coefficient sum
    // ((sum)(max)), the splitting count of the discrete bracket squared,
    // and for S the two-term (B - P) split.
    {
        auto [sum, mx] = rowstats(tbl.c, n, n - 1);
        double d1 = 4.0 * sum * mx;
        double lhs = l2(eval_lower_order(LowerOrderKind::P, n, st, tbl));
        double rhs = 0.0;
        for (int i = 1; i <= n - 1; ++i) rhs += a2(i) * a6(i) * a6(n - i) * a6(n - i);
        push("P_L2", lhs * lhs, d1 * c2 * rhs);

        double lhs65 = lp_norm(eval_lower_order(LowerOrderKind::P, n, st, tbl), 1.2);
        double rhs65 = 0.0;
        for (int i = 1; i <= n - 1; ++i) rhs65 += a6(i) * a2(i) * a2(n - i) * a2(n - i);
        push("P_65", lhs65 * lhs65, d1 * c2 * rhs65);
    }
    {
        auto [sum, mx] = rowstats(tbl.cbar, n, n - 1);
        double d3 = 4.0 * sum * mx;
        double lhs = l2(eval_lower_order(LowerOrderKind::Q, n, st, tbl));
        double rhs = 0.0;
        for (int i = 1; i <= n - 1; ++i) rhs += a6(i) * a6(i) * b2(n - 1 - i) * b6(n - 1 - i);
        push("Q_L2", lhs * lhs, d3 * c2 * rhs);
    }
    {
        auto [sum, mx] = rowstats(tbl.cbar, n, n - 2);
        double d4 = 4.0 * sum * mx;
        double lhs = lp_norm(eval_lower_order(LowerOrderKind::Qhat, n, st, tbl), 1.2);
        double rhs = 0.0;
        for (int i = 1; i <= n - 2; ++i) rhs += a2(i) * a6(i) * b2(n - 1 - i) * b2(n - 1 - i);
        push("Qhat_65", lhs * lhs, d4 * c2 * rhs);
    }
    {
        auto [sum, mx] = rowstats(tbl.ctilde, n, n - 2);
        double d5 = 9.0 * sum * mx;
        double lhs = l2(eval_lower_order(LowerOrderKind::R, n, st, tbl));
        double rhs = 0.0;
        for (int i = 1; i <= n - 2; ++i) rhs += a2(i) * a6(i) * a6(n - i) * a6(n - i);
        push("R_L2", lhs * lhs, d5 * c2 * rhs);
    }
    {
        auto [sum, mx] = rowstats(tbl.chat, n, n - 1);
        double d6 = 2.0 * (1.0 + sum) * std::max(1.0, mx);
        double lhs = l2(eval_lower_order(LowerOrderKind::S, n, st, tbl));
        double rhs = 0.0;
        for (int i = 1; i <= n; ++i) {
            double term = l2(bracket_wedge(st.A_deriv(i), st.B_deriv(n - i)));
            rhs += term * term;
        }
        for (int i = 1; i <= n - 1; ++i) {
            double term = l2(bracket_wedge(st.A_deriv(i), st.P_cache.at(n - i - 1)));
            rhs += term * term;
        }
        push("S_L2", lhs * lhs, d6 * rhs);
    }
    return out;
}

DerivRecorder::DerivRecorder(int n_max, GfsConstants k)
    : n_max_(n_max), gfs_(k), tbl_(build_coeff_tables(n_max + 1)) {
    if (n_max < 1) throw std::invalid_argument("DerivRecorder: n_max >= 1");
}

std::vector<std::string> DerivRecorder::names() const {
    std::vector<std::string> v{"B0_H1A", "Y0"};
    for (int n = 1; n <= n_max_; ++n) {
        v.push_back("A" + std::to_string(n) + "_L2");
        v.push_back("B" + std::to_string(n) + "_L2");
        v.push_back("A" + std::to_string(n) + "_L6");
        v.push_back("B" + std::to_string(n) + "_L6");
        v.push_back("A" + std::to_string(n) + "_H1A");
        v.push_back("B" + std::to_string(n) + "_H1A");
        v.push_back("X" + std::to_string(n));
        v.push_back("Y" + std::to_string(n));
    }
    return v;
}

std::vector<double> DerivRecorder::values(const Connection& A) const {
    DerivStack st = compute_derivative_stack(A, n_max_, tbl_);
    std::vector<double> v;
    v.push_back(h1a_norm(A, st.B_deriv(0)));
    v.push_back(xy_terms(st, 0, gfs_, tbl_).Y);
    for (int n = 1; n <= n_max_; ++n) {
        v.push_back(l2_norm(st.A_deriv(n)));
        v.push_back(l2_norm(st.B_deriv(n)));
        v.push_back(lp_norm(st.A_deriv(n), 6.0));
        v.push_back(lp_norm(st.B_deriv(n), 6.0));
        v.push_back(h1a_norm(A, st.A_deriv(n)));
        v.push_back(h1a_norm(A, st.B_deriv(n)));
        XY xy = xy_terms(st, n, gfs_, tbl_);
        v.push_back(xy.X);
        v.push_back(xy.Y);
    }
    return v;
}

}  // namespace ymflow
