#pragma once

#include <map>
#include <string>
#include <vector>

#include "ymflow/flow.hpp"

namespace ymflow {

/// Integer coefficients of the lower-order polynomials P_n, Q_n, R_n, S_n.
/// Row n of c/cbar holds i = 1..n-1, ctilde i = 1..n-2, chat i = 1..n-1.
struct CoeffTables {
    int n_max = 0;
    std::vector<std::vector<long long>> c, cbar, ctilde, chat;

    long long get(const std::vector<std::vector<long long>>& t, int n, int i) const {
        if (n < 0 || n >= static_cast<int>(t.size())) return 0;
        if (i < 1 || i >= static_cast<int>(t[n].size())) return 0;
        return t[n][i];
    }
};

CoeffTables build_coeff_tables(int n_max);

/// Slot-ordered symbolic differentiation: coefficients keyed by the pair of
/// derivative orders exactly as the recurrences produce them. P keys are
/// (i, n-i) for [A^(i) ^ A^(n-i)], Q keys (i, n-1-i) for [A^(i) -| B^(n-1-i)],
/// R keys (i, n-i) for [A^(i) -| A^(n-i)], S keys (i, n-i) for
/// [B^(i) ^ A^(n-i)] with the (0, n) curvature term included.
struct LeibnizTables {
    std::vector<std::map<std::array<int, 2>, long long>> P, Q, R, S;
};

LeibnizTables leibniz_oracle(int n_max);

/// Exact integer comparison of the recurrence tables against the oracle.
bool tables_match_oracle(const CoeffTables& t, const LeibnizTables& o, std::string* why = nullptr);

enum class LowerOrderKind { P, Q, Qhat, R, S };

/// Time-derivative stack at a fixed time: A^(1)..A^(n), B^(0)..B^(n), with
/// the P_k and Q_k fields cached from construction.
struct DerivStack {
    double t = 0.0;
    Connection A;
    std::vector<FormField> dA;       // dA[k-1] = A^(k)
    std::vector<FormField> dB;       // dB[k]   = B^(k)
    std::vector<FormField> P_cache;  // P_cache[k-1] = P_k
    std::vector<FormField> Q_cache;  // Q_cache[k-1] = Q_k

    int depth() const { return static_cast<int>(dA.size()); }
    const FormField& A_deriv(int k) const;
    const FormField& B_deriv(int k) const;
};

DerivStack compute_derivative_stack(const Connection& A, int n_max, const CoeffTables& tbl);

FormField eval_lower_order(LowerOrderKind kind, int n, const DerivStack& st,
                           const CoeffTables& tbl);

struct IdentityResiduals {
    double codiff_abs = 0.0, codiff_rel = 0.0;  // |d_A* A^(n) + R_n|
    double d_abs = 0.0, d_rel = 0.0;            // |d_A B^(n) - S_n|
};
/// Residuals of the consequence identities, reported both raw and relative
/// to the operand scale (x h, since the stencils carry 1/h).
IdentityResiduals identity_residuals(const DerivStack& st, int n, const CoeffTables& tbl);

struct XY {
    double X = 0.0;
    double Y = 0.0;
};
XY xy_terms(const DerivStack& st, int n, const GfsConstants& k, const CoeffTables& tbl);

/// c_n = (1/4)(3/2)^3 kappa^6 (2 c cbar_{(n+1)n})^4, the absorption constant
/// in the exponential weight psi_n.
double gronwall_cn(int n, const GfsConstants& k, const GroupSpec& g, const CoeffTables& tbl);

struct TheoremRow {
    double boundary = 0.0;
    double integral = 0.0;
    double total() const { return boundary + integral; }
};
struct TheoremQuantities {
    TheoremRow An, Bn, Cn, Dn, En, Fn;
};
/// Weighted boundary terms and integrals of the six estimate families at a
/// recorded time t (product-integration quadrature on the series rows).
TheoremQuantities theorem_quantities(const FlowSeries& s, int n, double t);

struct GronwallReport {
    int n = 0;
    std::vector<double> t;
    std::vector<double> lhs_a, rhs_a, margin_a;  // A-family weighted estimate, n >= 1
    std::vector<double> lhs_b, rhs_b, margin_b;  // B-family weighted estimate, n >= 0
    double min_margin_a = 0.0, min_margin_b = 0.0;
};
GronwallReport gronwall_check(const FlowSeries& s, int n, const GfsConstants& k, double c_n);

struct BoundCheck {
    std::string name;
    double lhs = 0.0, rhs = 0.0;
    bool ok = true;
};
/// Lower-order Hölder bounds with concrete combinatorial constants.
std::vector<BoundCheck> lower_order_bound_check(const DerivStack& st, int n,
                                                const CoeffTables& tbl);

/// Per-record derivative-stack columns for run_flow.
class DerivRecorder : public RecordExtras {
  public:
    DerivRecorder(int n_max, GfsConstants k);
    std::vector<std::string> names() const override;
    std::vector<double> values(const Connection& A) const override;

  private:
    int n_max_;
    GfsConstants gfs_;
    CoeffTables tbl_;
};

/// Column name helper (B0 norms live in the base columns).
std::string deriv_col(char which, int n, const std::string& suffix);

}  // namespace ymflow
