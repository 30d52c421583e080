#include "homsense/assign.hpp"

#include "homsense/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace homsense {

AssignmentMap::AssignmentMap(Index m, std::vector<Index> indices) : codomain_size(m), map(std::move(indices)) {}

bool AssignmentMap::is_injective() const {
    if (domain_size() > codomain_size) return false;
    std::vector<bool> seen(static_cast<std::size_t>(codomain_size), false);
    for (Index j : map) {
        if (j < 0 || j >= codomain_size) return false;
        if (seen[static_cast<std::size_t>(j)]) return false;
        seen[static_cast<std::size_t>(j)] = true;
    }
    return true;
}

bool AssignmentMap::is_order_preserving() const {
    for (std::size_t t = 1; t < map.size(); ++t) {
        if (map[t] <= map[t - 1]) return false;
    }
    return true;
}

void AssignmentMap::validate() const {
    if (!is_injective()) throw PreconditionError("assignment map is not an injection into [m]");
}

AssignmentMap AssignmentMap::identity(Index k, Index m) {
    std::vector<Index> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), Index{0});
    return AssignmentMap(m, std::move(idx));
}

namespace {

constexpr std::uint8_t kSkip = 0;
constexpr std::uint8_t kMatch = 1;

void check_sizes(Index k, Index m, const char* op) {
    if (k < 1) throw DimensionError(std::string(op) + ": first sequence is empty");
    if (k > m) {
        throw PreconditionError(std::string(op) + ": k = " + std::to_string(k) + " exceeds m = " +
                                std::to_string(m));
    }
}

void check_non_increasing(const Vector& v, const char* name) {
    for (Index i = 1; i < v.size(); ++i) {
        if (v(i) > v(i - 1)) throw PreconditionError(std::string("dp_align: ") + name + " is not sorted non-increasing");
    }
}

// Banded monotone alignment. Row i (1..k) only needs columns j in
// [i, i + w - 1] with w = m - k + 1, indexed by offset o = j - i:
//   D_i[o] = min(D_{i-1}[o] + (a_i - b_{i+o})^2, D_i[o-1])
// with D_0 = 0. Equal costs prefer the skip branch.
double banded_cost(const Vector& a, const Vector& b, std::vector<double>& prev, std::vector<double>& curr,
                   std::uint8_t* choice) {
    const Index k = a.size();
    const Index m = b.size();
    const Index w = m - k + 1;
    prev.assign(static_cast<std::size_t>(w), 0.0);
    curr.resize(static_cast<std::size_t>(w));
    for (Index i = 0; i < k; ++i) {
        const double ai = a(i);
        for (Index o = 0; o < w; ++o) {
            const double d = ai - b(i + o);
            const double match = prev[static_cast<std::size_t>(o)] + d * d;
            if (o > 0 && curr[static_cast<std::size_t>(o - 1)] <= match) {
                curr[static_cast<std::size_t>(o)] = curr[static_cast<std::size_t>(o - 1)];
                if (choice) choice[i * w + o] = kSkip;
            } else {
                curr[static_cast<std::size_t>(o)] = match;
                if (choice) choice[i * w + o] = kMatch;
            }
        }
        std::swap(prev, curr);
    }
    return prev[static_cast<std::size_t>(w - 1)];
}

std::vector<Index> backtrack(Index k, Index m, const std::vector<std::uint8_t>& choice) {
    const Index w = m - k + 1;
    std::vector<Index> sigma(static_cast<std::size_t>(k));
    Index o = w - 1;
    for (Index i = k - 1; i >= 0;) {
        if (choice[static_cast<std::size_t>(i * w + o)] == kSkip) {
            --o;
        } else {
            sigma[static_cast<std::size_t>(i)] = i + o;
            --i;
        }
    }
    return sigma;
}

AlignResult align_impl(const Vector& a, const Vector& b) {
    const Index k = a.size();
    const Index m = b.size();
    std::vector<double> prev, curr;
    std::vector<std::uint8_t> choice(static_cast<std::size_t>(k * (m - k + 1)));
    AlignResult out;
    out.cost = banded_cost(a, b, prev, curr, choice.data());
    out.map = AssignmentMap(m, backtrack(k, m, choice));
    return out;
}

} // namespace

AlignResult dp_align(const Vector& a, const Vector& b) {
    check_sizes(a.size(), b.size(), "dp_align");
    require_finite(a, "dp_align");
    require_finite(b, "dp_align");
    check_non_increasing(a, "a");
    check_non_increasing(b, "b");
    return align_impl(a, b);
}

AlignResult dp_align_unsorted(const Vector& a, const Vector& b) {
    check_sizes(a.size(), b.size(), "dp_align_unsorted");
    require_finite(a, "dp_align_unsorted");
    require_finite(b, "dp_align_unsorted");
    return align_impl(a, b);
}

SelectionScorer::SelectionScorer(const Vector& y) {
    if (y.size() < 1) throw DimensionError("recover_selection: y is empty");
    auto sorted = sort_desc_perm(y);
    y_sorted_ = std::move(sorted.sorted);
    y_perm_ = std::move(sorted.perm);
}

void SelectionScorer::sort_z(const Vector& z) {
    check_sizes(y_sorted_.size(), z.size(), "recover_selection");
    require_finite(z, "recover_selection");
    z_order_.resize(static_cast<std::size_t>(z.size()));
    std::iota(z_order_.begin(), z_order_.end(), Index{0});
    std::stable_sort(z_order_.begin(), z_order_.end(), [&](Index a, Index b) { return z(a) > z(b); });
    z_sorted_.resize(z.size());
    for (Index j = 0; j < z.size(); ++j) z_sorted_(j) = z(z_order_[static_cast<std::size_t>(j)]);
}

double SelectionScorer::cost(const Vector& z) {
    sort_z(z);
    return banded_cost(y_sorted_, z_sorted_, prev_, curr_, nullptr);
}

AlignResult SelectionScorer::solve(const Vector& z) {
    sort_z(z);
    const Index k = y_sorted_.size();
    const Index m = z.size();
    choice_.resize(static_cast<std::size_t>(k * (m - k + 1)));
    AlignResult out;
    out.cost = banded_cost(y_sorted_, z_sorted_, prev_, curr_, choice_.data());
    const auto sigma = backtrack(k, m, choice_);
    // s[p[i]] = q[sigma(i)]. Inside a run of exactly equal z values the
    // pairing does not affect the cost; pair by ascending y position so
    // that, e.g., z = 0 yields the identity.
    std::vector<Index> s(static_cast<std::size_t>(k));
    std::vector<Index> ys;
    for (Index i = 0; i < k;) {
        Index end = i + 1;
        while (end < k && z_sorted_(sigma[static_cast<std::size_t>(end)]) == z_sorted_(sigma[static_cast<std::size_t>(i)])) {
            ++end;
        }
        ys.assign(y_perm_.begin() + i, y_perm_.begin() + end);
        std::sort(ys.begin(), ys.end());
        for (Index j = i; j < end; ++j) {
            s[static_cast<std::size_t>(ys[static_cast<std::size_t>(j - i)])] =
                z_order_[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])];
        }
        i = end;
    }
    out.map = AssignmentMap(m, std::move(s));
    return out;
}

AlignResult recover_selection(const Vector& y, const Vector& z) {
    check_sizes(y.size(), z.size(), "recover_selection");
    require_finite(y, "recover_selection");
    SelectionScorer scorer(y);
    return scorer.solve(z);
}

LapResult lap_solve(const Matrix& cost) {
    const Index k = cost.rows();
    const Index m = cost.cols();
    check_sizes(k, m, "lap_solve");
    require_finite(cost, "lap_solve cost");

    // 1-based potentials u (rows), v (columns); col_owner[j] = row matched to column j.
    constexpr double inf = std::numeric_limits<double>::infinity();
    const auto K = static_cast<std::size_t>(k);
    const auto M = static_cast<std::size_t>(m);
    std::vector<double> u(K + 1, 0.0), v(M + 1, 0.0), minv(M + 1);
    std::vector<std::size_t> col_owner(M + 1, 0), way(M + 1, 0);
    std::vector<bool> used(M + 1);

    for (std::size_t i = 1; i <= K; ++i) {
        col_owner[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const std::size_t i0 = col_owner[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= M; ++j) {
                if (used[j]) continue;
                const double cur = cost(static_cast<Index>(i0 - 1), static_cast<Index>(j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= M; ++j) {
                if (used[j]) {
                    u[col_owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<Index> map(K);
    for (std::size_t j = 1; j <= M; ++j) {
        if (col_owner[j] != 0) map[col_owner[j] - 1] = static_cast<Index>(j - 1);
    }
    LapResult out;
    out.map = AssignmentMap(m, std::move(map));
    for (Index t = 0; t < k; ++t) out.total += cost(t, out.map[t]);
    return out;
}

} // namespace homsense
