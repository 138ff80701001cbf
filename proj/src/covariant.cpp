#include "ymflow/covariant.hpp"

#include <cmath>

#include "ymflow/kernels.hpp"

namespace ymflow {

namespace {

// Sign of sorting (I, J) into the ordered basis of I|J: one factor -1 per
// pair (i in I, j in J) with i > j.
int split_sign(int imask, int jmask) {
    int inv = 0;
    for (int i = 0; i < 3; ++i)
        if ((imask >> i) & 1) inv += __builtin_popcount(jmask & ((1 << i) - 1));
    return (inv % 2 == 0) ? 1 : -1;
}

double epsilon_scale(const GroupSpec& g) {
    if (g.dim_k != 3) return 0.0;
    double s = g.f[0][1][2];
    if (s == 0.0) return 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                double want = 0.0;
                if (a != b && b != c && a != c) {
                    bool even = (a == 0 && b == 1) || (a == 1 && b == 2) || (a == 2 && b == 0);
                    want = even ? s : -s;
                }
                if (g.f[a][b][c] != want) return 0.0;
            }
    return s;
}

// Average plane (io, a) of u onto a target lattice of sizes ts, one offset
// list per axis. clip=false requires every read to be in range (wrapping on
// periodic grids); clip=true drops out-of-range reads and renormalizes.
std::vector<double> avg_general(const FormField& u, int io, int a, const std::array<int, 3>& ts,
                                const std::array<std::vector<int>, 3>& axoffs, bool clip) {
    const auto is = u.osize(io);
    const bool per = u.grid().periodic();
    const double* src = u.plane(io, a);
    std::vector<double> out(static_cast<std::size_t>(ts[0]) * ts[1] * ts[2], 0.0);

    kern::parallel_for(ts[0], [&](std::size_t xb, std::size_t xe) {
    std::size_t idx = xb * ts[1] * ts[2];
    for (int x = static_cast<int>(xb); x < static_cast<int>(xe); ++x)
        for (int y = 0; y < ts[1]; ++y)
            for (int z = 0; z < ts[2]; ++z, ++idx) {
                double acc = 0.0;
                int cnt = 0;
                for (int dx : axoffs[0]) {
                    int xs = x + dx;
                    if (per) xs = (xs + is[0]) % is[0];
                    else if (xs < 0 || xs >= is[0]) { if (clip) continue; else throw std::logic_error("avg: out of range"); }
                    for (int dy : axoffs[1]) {
                        int ys = y + dy;
                        if (per) ys = (ys + is[1]) % is[1];
                        else if (ys < 0 || ys >= is[1]) { if (clip) continue; else throw std::logic_error("avg: out of range"); }
                        for (int dz : axoffs[2]) {
                            int zs = z + dz;
                            if (per) zs = (zs + is[2]) % is[2];
                            else if (zs < 0 || zs >= is[2]) { if (clip) continue; else throw std::logic_error("avg: out of range"); }
                            acc += src[(static_cast<std::size_t>(xs) * is[1] + ys) * is[2] + zs];
                            ++cnt;
                        }
                    }
                }
                out[idx] = (cnt > 0) ? acc / cnt : 0.0;
            }
    });
    return out;
}

std::array<std::vector<int>, 3> offsets_from_mask(int offmask) {
    std::array<std::vector<int>, 3> ax;
    for (int i = 0; i < 3; ++i)
        ax[i] = ((offmask >> i) & 1) ? std::vector<int>{0, 1} : std::vector<int>{0};
    return ax;
}

void check_pair(const FormField& u, const FormField& v, const char* what) {
    if (!(u.grid() == v.grid())) throw std::invalid_argument(std::string(what) + ": grid mismatch");
    if (u.dim_k() != v.dim_k())
        throw std::invalid_argument(std::string(what) + ": group mismatch");
}

}  // namespace

FormField bracket_wedge(const FormField& u, const FormField& v) {
    check_pair(u, v, "bracket_wedge");
    const int r = u.degree(), p = v.degree();
    if (r + p > 3) throw std::invalid_argument("bracket_wedge: degree overflow");
    const GroupSpec& g = u.group();
    FormField out(r + p, u.grid(), g);
    if (g.abelian()) return out;
    const double eps = epsilon_scale(g);

    for (int oo = 0; oo < n_orientations(r + p); ++oo) {
        const int M = orient_mask(r + p, oo);
        const auto ts = out.osize(oo);
        const std::size_t nc = out.cells(oo);
        for (int imask = 0; imask < 8; ++imask) {
            if ((imask & M) != imask || __builtin_popcount(imask) != r) continue;
            const int jmask = M & ~imask;
            const double sign = split_sign(imask, jmask);
            const int io = mask_orient(r, imask);
            const int jo = mask_orient(p, jmask);

            std::vector<std::vector<double>> ub(g.dim_k), vb(g.dim_k);
            for (int a = 0; a < g.dim_k; ++a) {
                ub[a] = avg_general(u, io, a, ts, offsets_from_mask(jmask), false);
                vb[a] = avg_general(v, jo, a, ts, offsets_from_mask(imask), false);
            }
            if (eps != 0.0) {
                kern::cross3_acc(out.plane(oo, 0), out.plane(oo, 1), out.plane(oo, 2),
                                 ub[0].data(), ub[1].data(), ub[2].data(), vb[0].data(),
                                 vb[1].data(), vb[2].data(), sign * eps, nc);
            } else {
                for (int a = 0; a < g.dim_k; ++a)
                    for (int b = 0; b < g.dim_k; ++b)
                        for (int c = 0; c < g.dim_k; ++c)
                            if (g.f[a][b][c] != 0.0)
                                kern::mul_acc(out.plane(oo, c), ub[a].data(), vb[b].data(),
                                              sign * g.f[a][b][c], nc);
            }
        }
    }
    out.clamp_tangential();
    return out;
}

FormField interior_bracket(const FormField& u, const FormField& v) {
    check_pair(u, v, "interior_bracket");
    const int pu = u.degree(), q = v.degree();
    const int r = q - pu;
    if (r < 0) throw std::invalid_argument("interior_bracket: degree mismatch");
    const GroupSpec& g = u.group();
    FormField out(r, u.grid(), g);
    if (g.abelian()) return out;
    const double eps = epsilon_scale(g);
    const bool per = u.grid().periodic();

    for (int jo = 0; jo < n_orientations(r); ++jo) {
        const int jmask = orient_mask(r, jo);
        const auto os = out.osize(jo);
        for (int imask = 0; imask < 8; ++imask) {
            if (__builtin_popcount(imask) != pu || (imask & jmask)) continue;
            const int M = imask | jmask;
            const double sign = split_sign(imask, jmask);
            const int io = mask_orient(pu, imask);
            const int mo = mask_orient(q, M);
            const auto ms = v.osize(mo);
            const std::size_t ncm = v.cells(mo);

            std::vector<std::vector<double>> ub(g.dim_k);
            for (int a = 0; a < g.dim_k; ++a)
                ub[a] = avg_general(u, io, a, ms, offsets_from_mask(jmask), false);

            // G_b(tau) = sum_{a,c} f[a][b][c] ubar_a(tau) v_c(tau); for the
            // epsilon table this is eps * (v x ubar).
            std::vector<std::vector<double>> G(g.dim_k, std::vector<double>(ncm, 0.0));
            if (eps != 0.0) {
                kern::cross3_acc(G[0].data(), G[1].data(), G[2].data(), v.plane(mo, 0),
                                 v.plane(mo, 1), v.plane(mo, 2), ub[0].data(), ub[1].data(),
                                 ub[2].data(), eps, ncm);
            } else {
                for (int a = 0; a < g.dim_k; ++a)
                    for (int b = 0; b < g.dim_k; ++b)
                        for (int c = 0; c < g.dim_k; ++c)
                            if (g.f[a][b][c] != 0.0)
                                kern::mul_acc(G[b].data(), ub[a].data(), v.plane(mo, c),
                                              g.f[a][b][c], ncm);
            }

            // Transpose of the sub-cell averaging: gather from the 2^{|I|}
            // enclosing cells with equal weights.
            const double w = sign / static_cast<double>(1 << pu);
            std::vector<std::array<int, 3>> deltas;
            {
                std::array<std::vector<int>, 3> ax = offsets_from_mask(imask);
                for (int dx : ax[0])
                    for (int dy : ax[1])
                        for (int dz : ax[2]) deltas.push_back({dx, dy, dz});
            }
            for (int b = 0; b < g.dim_k; ++b) {
                double* dst = out.plane(jo, b);
                const double* gb = G[b].data();
                kern::parallel_for(os[0], [&](std::size_t xb, std::size_t xe) {
                std::size_t idx = xb * os[1] * os[2];
                for (int x = static_cast<int>(xb); x < static_cast<int>(xe); ++x)
                    for (int y = 0; y < os[1]; ++y)
                        for (int z = 0; z < os[2]; ++z, ++idx) {
                            double acc = 0.0;
                            for (auto& d : deltas) {
                                int xs = x - d[0], ys = y - d[1], zs = z - d[2];
                                if (per) {
                                    xs = (xs + ms[0]) % ms[0];
                                    ys = (ys + ms[1]) % ms[1];
                                    zs = (zs + ms[2]) % ms[2];
                                } else if (xs < 0 || xs >= ms[0] || ys < 0 || ys >= ms[1] ||
                                           zs < 0 || zs >= ms[2]) {
                                    continue;
                                }
                                acc += gb[(static_cast<std::size_t>(xs) * ms[1] + ys) * ms[2] + zs];
                            }
                            dst[idx] += w * acc;
                        }
                });
            }
        }
    }
    out.clamp_tangential();
    return out;
}

FormField curvature(const Connection& A) {
    FormField B = exterior_derivative(A.a);
    if (!A.group().abelian()) {
        FormField aa = bracket_wedge(A.a, A.a);
        add_scaled(B, aa, 0.5);
    }
    return B;
}

FormField covariant_d(const Connection& A, const FormField& w) {
    FormField r = exterior_derivative(w);
    if (!A.group().abelian()) r += bracket_wedge(A.a, w);
    return r;
}

FormField covariant_codifferential(const Connection& A, const FormField& w) {
    FormField r = codifferential(w);
    if (!A.group().abelian()) r += interior_bracket(A.a, w);
    return r;
}

namespace {

// Centered difference of one scalar plane along axis j (one-sided at box
// boundaries), written into dst.
void centered_diff(const FormField& w, int o, int a, int j, double h, bool per, double* dst) {
    const auto ts = w.osize(o);
    const double* src = w.plane(o, a);
    const int sj = ts[j];
    std::size_t idx = 0;
    for (int x = 0; x < ts[0]; ++x)
        for (int y = 0; y < ts[1]; ++y)
            for (int z = 0; z < ts[2]; ++z, ++idx) {
                int c[3] = {x, y, z};
                int cp[3] = {x, y, z}, cm[3] = {x, y, z};
                cp[j] = c[j] + 1;
                cm[j] = c[j] - 1;
                double scale = 0.5 / h;
                if (per) {
                    cp[j] = (cp[j] + sj) % sj;
                    cm[j] = (cm[j] + sj) % sj;
                } else {
                    if (cp[j] >= sj) { cp[j] = c[j]; scale = 1.0 / h; }
                    if (cm[j] < 0) { cm[j] = c[j]; scale = 1.0 / h; }
                }
                dst[idx] = scale * (src[w.cidx(o, cp[0], cp[1], cp[2])] -
                                    src[w.cidx(o, cm[0], cm[1], cm[2])]);
            }
}

// Offset lists for averaging the direction-j edge samples of a connection
// onto cells of span `mask` (nearest samples straddling the cell center).
std::array<std::vector<int>, 3> conn_avg_offsets(int mask, int j) {
    std::array<std::vector<int>, 3> ax;
    for (int i = 0; i < 3; ++i) {
        bool spans = (mask >> i) & 1;
        if (i == j) ax[i] = spans ? std::vector<int>{0} : std::vector<int>{-1, 0};
        else ax[i] = spans ? std::vector<int>{0, 1} : std::vector<int>{0};
    }
    return ax;
}

}  // namespace

double h1a_norm(const Connection& A, const FormField& w) {
    if (!(A.grid() == w.grid())) throw std::invalid_argument("h1a_norm: grid mismatch");
    const GridSpec& g = w.grid();
    const GroupSpec& gr = w.group();
    const bool per = g.periodic();
    double total = l2_norm(w);
    total *= total;

    for (int j = 0; j < 3; ++j) {
        FormField D(w.degree(), g, gr);
        for (int o = 0; o < n_orientations(w.degree()); ++o) {
            const int mask = orient_mask(w.degree(), o);
            const auto ts = w.osize(o);
            const std::size_t nc = w.cells(o);
            for (int a = 0; a < gr.dim_k; ++a)
                centered_diff(w, o, a, j, g.h, per, D.plane(o, a));
            if (!gr.abelian()) {
                std::vector<std::vector<double>> abar(gr.dim_k);
                for (int a = 0; a < gr.dim_k; ++a)
                    abar[a] = avg_general(A.a, j, a, ts, conn_avg_offsets(mask, j), true);
                for (int a = 0; a < gr.dim_k; ++a)
                    for (int b = 0; b < gr.dim_k; ++b)
                        for (int c = 0; c < gr.dim_k; ++c)
                            if (gr.f[a][b][c] != 0.0)
                                kern::mul_acc(D.plane(o, c), abar[a].data(), w.plane(o, b),
                                              gr.f[a][b][c], nc);
            }
        }
        double dn = l2_norm(D);
        total += dn * dn;
    }
    return std::sqrt(total);
}

double gfs_lambda(const FormField& B, const GfsConstants& k) {
    double b2 = lp_norm(B, 2.0);
    double b4 = b2 * b2;
    return k.lambda_m + k.gamma * b4 * b4;
}

GfsReport gfs_check(const Connection& A, const FormField& w, const GfsConstants& k) {
    if (w.grid().bc == Bc::Dirichlet && !w.tangential_is_zero(0.0))
        throw std::invalid_argument("gfs_check: Dirichlet input with nonzero tangential trace");
    GfsReport rep;
    double l6 = lp_norm(w, 6.0);
    rep.lhs = l6 * l6;
    double dn = l2_norm(covariant_d(A, w));
    double dsn = (w.degree() >= 1) ? l2_norm(covariant_codifferential(A, w)) : 0.0;
    double l2 = l2_norm(w);
    double lam = gfs_lambda(curvature(A), k);
    rep.rhs = k.kappa * k.kappa * (dn * dn + dsn * dsn + lam * l2 * l2);
    rep.ratio = (l2 == 0.0) ? 0.0 : rep.lhs / rep.rhs;
    return rep;
}

}  // namespace ymflow
