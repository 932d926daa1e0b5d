#include "mirlab/oracle.hpp"

#include "mirlab/errors.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>

namespace mirlab {

std::size_t EnumerationBox::lattice_size() const {
    std::size_t total = 1;
    for (long u : upper) {
        const auto width = static_cast<std::size_t>(std::max(u, -1L) + 1);
        if (width == 0) return 0;
        if (total > std::numeric_limits<std::size_t>::max() / width) return std::numeric_limits<std::size_t>::max();
        total *= width;
    }
    return total;
}

EnumerationBox default_box(const MipInstance& instance, long cap) {
    const Vector ub = instance.int_upper_bounds();
    EnumerationBox box;
    box.upper.reserve(static_cast<std::size_t>(ub.size()));
    for (Index j = 0; j < ub.size(); ++j)
        box.upper.push_back(std::isfinite(ub(j)) ? static_cast<long>(std::floor(ub(j) + kIntegralityTol)) : cap);
    return box;
}

namespace {

constexpr double kTol = 1e-9;

// Bases of C: independent column subsets of size rank(C).
class VertexEnumerator {
public:
    explicit VertexEnumerator(const Matrix& C) : C_(C) {
        const Index p = C.cols();
        if (p == 0) return;
        Eigen::FullPivLU<Matrix> lu(C);
        lu.setThreshold(kTol);
        rank_ = lu.rank();
        if (rank_ == 0) return;

        double combos = 1.0;
        for (Index i = 0; i < rank_; ++i) combos = combos * static_cast<double>(p - i) / static_cast<double>(i + 1);
        if (combos > 1e6) throw EnumerationTooLarge("too many candidate bases in continuous restriction");

        std::vector<Index> subset;
        std::function<void(Index)> recurse = [&](Index from) {
            if (static_cast<Index>(subset.size()) == rank_) {
                Matrix sub(C.rows(), rank_);
                for (Index k = 0; k < rank_; ++k) sub.col(k) = C.col(subset[static_cast<std::size_t>(k)]);
                Eigen::ColPivHouseholderQR<Matrix> qr(sub);
                qr.setThreshold(kTol);
                if (qr.rank() == rank_) bases_.push_back({subset, std::move(qr)});
                return;
            }
            for (Index j = from; j < p; ++j) {
                subset.push_back(j);
                recurse(j + 1);
                subset.pop_back();
            }
        };
        recurse(0);
    }

    /// Vertices of {v >= 0 : Cv = r}.
    std::vector<Vector> vertices(const Vector& r) const {
        const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
        std::vector<Vector> out;
        if (C_.cols() == 0 || rank_ == 0) {
            if (r.size() == 0 || r.cwiseAbs().maxCoeff() <= kTol * scale) out.push_back(Vector::Zero(C_.cols()));
            return out;
        }
        std::map<std::vector<long long>, bool> seen;
        for (const auto& basis : bases_) {
            const Vector vs = basis.qr.solve(r);
            Vector v = Vector::Zero(C_.cols());
            bool ok = true;
            for (Index k = 0; k < rank_; ++k) {
                double value = vs(k);
                if (value < -kTol * scale) {
                    ok = false;
                    break;
                }
                if (value < 0) value = 0;
                v(basis.columns[static_cast<std::size_t>(k)]) = value;
            }
            if (!ok) continue;
            if ((C_ * v - r).cwiseAbs().maxCoeff() > 1e-8 * scale) continue;
            std::vector<long long> key(static_cast<std::size_t>(v.size()));
            for (Index j = 0; j < v.size(); ++j) key[static_cast<std::size_t>(j)] = std::llround(v(j) * 1e8);
            if (seen.emplace(std::move(key), true).second) out.push_back(std::move(v));
        }
        return out;
    }

    /// Extreme directions of {d >= 0 : Cd = 0}.
    std::vector<Vector> rays() const {
        std::vector<Vector> out;
        const Index p = C_.cols();
        if (p == 0) return out;
        if (rank_ == 0) {
            for (Index j = 0; j < p; ++j) out.push_back(Vector::Unit(p, j));
            return out;
        }
        for (const auto& basis : bases_) {
            for (Index j = 0; j < p; ++j) {
                bool in_basis = false;
                for (Index c : basis.columns) in_basis = in_basis || c == j;
                if (in_basis) continue;
                const Vector ds = basis.qr.solve(Vector(-C_.col(j)));
                Vector d = Vector::Zero(p);
                d(j) = 1.0;
                bool ok = true;
                for (Index k = 0; k < rank_; ++k) {
                    if (ds(k) < -kTol) ok = false;
                    d(basis.columns[static_cast<std::size_t>(k)]) = std::max(ds(k), 0.0);
                }
                if (ok && (C_ * d).cwiseAbs().maxCoeff() <= 1e-8) out.push_back(std::move(d));
            }
        }
        return out;
    }

private:
    struct Basis {
        std::vector<Index> columns;
        Eigen::ColPivHouseholderQR<Matrix> qr;
    };

    const Matrix& C_;
    Index rank_ = 0;
    std::vector<Basis> bases_;
};

void check_caps(const MipInstance& instance, const EnumerationBox& box) {
    if (static_cast<Index>(box.upper.size()) != instance.num_int_vars())
        throw ShapeError("enumeration box does not match integer variable count");
    if (instance.num_int_vars() > kMaxOracleIntVars)
        throw EnumerationTooLarge("oracle supports at most 20 integer variables");
    if (box.lattice_size() > kMaxLatticePoints) throw EnumerationTooLarge("enumeration box exceeds 10^6 lattice points");
}

template <typename Visit>
void for_each_lattice_point(const EnumerationBox& box, Visit&& visit) {
    const std::size_t n = box.upper.size();
    for (long u : box.upper)
        if (u < 0) return;
    Vector x = Vector::Zero(static_cast<Index>(n));
    while (true) {
        visit(static_cast<const Vector&>(x));
        std::size_t k = 0;
        while (k < n) {
            if (x(static_cast<Index>(k)) < static_cast<double>(box.upper[k])) {
                x(static_cast<Index>(k)) += 1.0;
                break;
            }
            x(static_cast<Index>(k)) = 0.0;
            ++k;
        }
        if (k == n) return;
    }
}

} // namespace

OracleOptimum brute_force_optimum(const MipInstance& instance, const EnumerationBox& box) {
    check_caps(instance, box);
    VertexEnumerator enumerator(instance.C);
    bool negative_ray = false;
    for (const auto& ray : enumerator.rays())
        if (instance.g.dot(ray) < -kTol) negative_ray = true;

    std::optional<OracleOptimum> best;
    for_each_lattice_point(box, [&](const Vector& x) {
        const Vector r = instance.b - instance.A * x;
        for (auto& v : enumerator.vertices(r)) {
            if (negative_ray) throw UnboundedProblem("continuous restriction is unbounded");
            const double value = instance.f.dot(x) + instance.g.dot(v);
            if (!best || value < best->objective - 1e-12) best = OracleOptimum{value, Point{x, v}};
        }
    });
    if (!best) throw InfeasibleProblem("no lattice point in the box has a feasible completion");
    return *best;
}

std::vector<Point> enumerate_feasible_points(const MipInstance& instance, const EnumerationBox& box) {
    check_caps(instance, box);
    VertexEnumerator enumerator(instance.C);
    std::vector<Point> out;
    for_each_lattice_point(box, [&](const Vector& x) {
        const Vector r = instance.b - instance.A * x;
        for (auto& v : enumerator.vertices(r)) out.push_back(Point{x, std::move(v)});
    });
    return out;
}

} // namespace mirlab
