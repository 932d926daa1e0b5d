#pragma once

// Dense bounded revised simplex.
//
//   min  c'x   s.t.  Ax = b,  l <= x <= u,  l finite.
//
// Two phases with one artificial column per row. The basis inverse is kept
// explicitly and updated with eta transformations, refactorized every
// `refactor_interval` pivots. Pricing is Dantzig with a switch to Bland's rule
// after a run of degenerate pivots.
//
// An optimal result carries a WarmStart. Passing it to a later solve of the
// same matrix with different bounds restarts from that basis with the bounded
// dual simplex, falling back to a cold start when the basis is unusable.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mirlab {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(LpStatus status) {
    switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
    }
    return "?";
}

template <typename Scalar>
struct LinearProgram {
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    MatrixType A;
    VectorType b;
    VectorType cost;
    VectorType lower;
    VectorType upper;
};

template <typename Scalar>
struct WarmStart {
    std::vector<Eigen::Index> basis;      // one column per row, artificials included
    std::vector<unsigned char> at_upper;  // per column: nonbasic at its upper bound
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row_sign;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> inverse;  // basis inverse, may be empty
    Eigen::Index updates = 0;  // eta updates applied to `inverse` since its last refactorization

    bool empty() const { return basis.empty(); }
};

template <typename Scalar>
struct SimplexResult {
    using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    LpStatus status = LpStatus::Infeasible;
    VectorType x;
    Scalar objective = 0;
    VectorType duals;          // one per row
    VectorType reduced_costs;  // one per column
    std::vector<Eigen::Index> basis;
    Eigen::Index iterations = 0;
    WarmStart<Scalar> warm;
    bool warm_started = false;
};

template <typename Scalar>
class RevisedSimplex {
public:
    using Index = Eigen::Index;
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    struct Options {
        Scalar feasibility_tol = Scalar(1e-9);
        Scalar optimality_tol = Scalar(1e-9);
        Scalar pivot_tol = Scalar(1e-9);
        Index max_iterations = 200000;
        Index refactor_interval = 64;
        Index degenerate_switch = 50;
    };

    RevisedSimplex() = default;
    explicit RevisedSimplex(Options options) : options_(options) {}

    SimplexResult<Scalar> solve(const LinearProgram<Scalar>& lp, const WarmStart<Scalar>* warm = nullptr) {
        const Index m = lp.A.rows();
        const Index n = lp.A.cols();
        if (lp.b.size() != m || lp.cost.size() != n || lp.lower.size() != n || lp.upper.size() != n)
            throw std::invalid_argument("linear program dimensions disagree");
        for (Index j = 0; j < n; ++j)
            if (!std::isfinite(static_cast<double>(lp.lower(j))))
                throw std::invalid_argument("simplex requires finite lower bounds");
        m_ = m;
        n_ = n;
        total_ = n + m;
        iterations_ = 0;

        if (warm && warm->basis.size() == static_cast<std::size_t>(m) &&
            warm->at_upper.size() == static_cast<std::size_t>(total_) && warm->row_sign.size() == m) {
            SimplexResult<Scalar> result;
            if (solve_warm(lp, *warm, result)) return result;
            iterations_ = 0;
        }
        return solve_cold(lp);
    }

private:
    enum class State : unsigned char { Basic, Lower, Upper };

    void load(const LinearProgram<Scalar>& lp, const VectorType& row_sign) {
        row_sign_ = row_sign;
        work_.resize(m_, total_);
        work_.leftCols(n_) = row_sign_.asDiagonal() * lp.A;
        work_.rightCols(m_).setIdentity();
        rhs_ = row_sign_.cwiseProduct(lp.b - lp.A * lp.lower);
        ub_.resize(total_);
        ub_.head(n_) = lp.upper - lp.lower;
        ub_.tail(m_).setConstant(std::numeric_limits<Scalar>::infinity());
        x_ = VectorType::Zero(total_);
        state_.assign(static_cast<std::size_t>(total_), State::Lower);
        basis_.resize(static_cast<std::size_t>(m_));
        pivots_since_refactor_ = 0;
    }

    SimplexResult<Scalar> solve_cold(const LinearProgram<Scalar>& lp) {
        const Index m = m_;
        const Index n = n_;
        VectorType sign = VectorType::Ones(m);
        const VectorType shifted = lp.b - lp.A * lp.lower;
        for (Index i = 0; i < m; ++i)
            if (shifted(i) < 0) sign(i) = Scalar(-1);
        load(lp, sign);
        x_.tail(m) = rhs_;
        for (Index i = 0; i < m; ++i) {
            basis_[static_cast<std::size_t>(i)] = n + i;
            state_[static_cast<std::size_t>(n + i)] = State::Basic;
        }
        binv_ = MatrixType::Identity(m, m);

        SimplexResult<Scalar> result;

        VectorType phase1 = VectorType::Zero(total_);
        phase1.tail(m).setOnes();
        LpStatus status = iterate(phase1);
        if (status == LpStatus::IterationLimit) {
            result.status = status;
            result.iterations = iterations_;
            return result;
        }
        refactor();
        const Scalar infeasibility = x_.tail(m).sum();
        const Scalar scale = std::max(Scalar(1), rhs_.cwiseAbs().maxCoeff());
        if (m > 0 && infeasibility > Scalar(1e-7) * scale) {
            result.status = LpStatus::Infeasible;
            result.iterations = iterations_;
            return result;
        }
        drive_out_artificials();
        for (Index i = 0; i < m; ++i) ub_(n + i) = 0;

        status = iterate(phase_two_cost(lp));
        result.iterations = iterations_;
        if (status != LpStatus::Optimal) {
            result.status = status;
            return result;
        }
        refactor();
        finish(lp, result);
        return result;
    }

    VectorType phase_two_cost(const LinearProgram<Scalar>& lp) const {
        VectorType cost = VectorType::Zero(total_);
        cost.head(n_) = lp.cost;
        return cost;
    }

    void finish(const LinearProgram<Scalar>& lp, SimplexResult<Scalar>& result) {
        const Index n = n_;
        const Index m = m_;
        result.status = LpStatus::Optimal;
        result.x = lp.lower + x_.head(n);
        // snap values sitting on a bound
        for (Index j = 0; j < n; ++j) {
            if (std::abs(result.x(j) - lp.lower(j)) <= options_.feasibility_tol) result.x(j) = lp.lower(j);
            if (std::isfinite(static_cast<double>(lp.upper(j))) &&
                std::abs(result.x(j) - lp.upper(j)) <= options_.feasibility_tol)
                result.x(j) = lp.upper(j);
        }
        result.objective = lp.cost.dot(result.x);
        const VectorType phase2 = phase_two_cost(lp);
        VectorType cb(m);
        for (Index i = 0; i < m; ++i) cb(i) = phase2(basis_[static_cast<std::size_t>(i)]);
        const VectorType y = binv_.transpose() * cb;
        result.duals = row_sign_.cwiseProduct(y);
        result.reduced_costs = lp.cost - lp.A.transpose() * result.duals;
        result.basis = basis_;
        result.iterations = iterations_;
        result.warm.basis = basis_;
        result.warm.row_sign = row_sign_;
        result.warm.inverse = binv_;
        result.warm.updates = pivots_since_refactor_;
        result.warm.at_upper.assign(static_cast<std::size_t>(total_), 0);
        for (Index j = 0; j < total_; ++j)
            result.warm.at_upper[static_cast<std::size_t>(j)] = state_[static_cast<std::size_t>(j)] == State::Upper;
    }

    // Restarts from `warm`; returns false when a cold start is needed.
    bool solve_warm(const LinearProgram<Scalar>& lp, const WarmStart<Scalar>& warm, SimplexResult<Scalar>& result) {
        load(lp, warm.row_sign);
        for (Index i = 0; i < m_; ++i) ub_(n_ + i) = 0;
        std::vector<unsigned char> in_basis(static_cast<std::size_t>(total_), 0);
        for (Index i = 0; i < m_; ++i) {
            const Index var = warm.basis[static_cast<std::size_t>(i)];
            if (var < 0 || var >= total_ || in_basis[static_cast<std::size_t>(var)]) return false;
            in_basis[static_cast<std::size_t>(var)] = 1;
            basis_[static_cast<std::size_t>(i)] = var;
            state_[static_cast<std::size_t>(var)] = State::Basic;
        }
        for (Index j = 0; j < total_; ++j) {
            if (in_basis[static_cast<std::size_t>(j)]) continue;
            const bool upper = warm.at_upper[static_cast<std::size_t>(j)] && std::isfinite(static_cast<double>(ub_(j)));
            state_[static_cast<std::size_t>(j)] = upper ? State::Upper : State::Lower;
            x_(j) = upper ? ub_(j) : Scalar(0);
        }
        if (warm.inverse.rows() == m_ && warm.inverse.cols() == m_) {
            binv_ = warm.inverse;
            pivots_since_refactor_ = warm.updates;
            update_basic_values();
        } else {
            refactor();
        }
        if (!binv_.allFinite()) return false;

        const VectorType cost = phase_two_cost(lp);
        // restore dual feasibility of boxed columns by moving them to the other bound
        {
            const VectorType d = reduced_costs(cost);
            bool moved = false;
            for (Index j = 0; j < total_; ++j) {
                auto& s = state_[static_cast<std::size_t>(j)];
                if (s == State::Basic || ub_(j) <= 0) continue;
                if (s == State::Lower && d(j) < -options_.optimality_tol) {
                    if (!std::isfinite(static_cast<double>(ub_(j)))) return false;
                    s = State::Upper;
                    x_(j) = ub_(j);
                    moved = true;
                } else if (s == State::Upper && d(j) > options_.optimality_tol) {
                    s = State::Lower;
                    x_(j) = 0;
                    moved = true;
                }
            }
            if (moved) update_basic_values();
        }

        const LpStatus dual = dual_iterate(cost);
        if (dual == LpStatus::IterationLimit) return false;
        if (dual == LpStatus::Infeasible) {
            result.status = LpStatus::Infeasible;
            result.iterations = iterations_;
            result.warm_started = true;
            return true;
        }
        const LpStatus primal = iterate(cost);
        if (primal != LpStatus::Optimal) return false;
        const Scalar scale = Scalar(1e-7) * std::max(Scalar(1), rhs_.cwiseAbs().maxCoeff());
        update_basic_values();
        if (equation_residual() > scale) {
            refactor();
            if (equation_residual() > scale) return false;
        }
        if (primal_violation() > scale) return false;
        finish(lp, result);
        result.warm_started = true;
        return true;
    }

    VectorType reduced_costs(const VectorType& cost) const {
        VectorType cb(m_);
        for (Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
        const VectorType y = binv_.transpose() * cb;
        VectorType d = cost - work_.transpose() * y;
        for (Index i = 0; i < m_; ++i) d(basis_[static_cast<std::size_t>(i)]) = 0;
        return d;
    }

    Scalar bound_violation(Index var) const {
        const Scalar v = x_(var);
        if (v < 0) return -v;
        if (v > ub_(var)) return v - ub_(var);
        return 0;
    }

    Scalar equation_residual() const {
        if (m_ == 0) return 0;
        return (work_ * x_ - rhs_).cwiseAbs().maxCoeff();
    }

    Scalar primal_violation() const {
        Scalar worst = 0;
        for (Index i = 0; i < m_; ++i) worst = std::max(worst, bound_violation(basis_[static_cast<std::size_t>(i)]));
        return worst;
    }

    // Bounded dual simplex from a dual feasible basis.
    LpStatus dual_iterate(const VectorType& cost) {
        while (true) {
            if (iterations_ >= options_.max_iterations) return LpStatus::IterationLimit;
            Index row = -1;
            Scalar worst = options_.feasibility_tol;
            for (Index i = 0; i < m_; ++i) {
                const Scalar v = bound_violation(basis_[static_cast<std::size_t>(i)]);
                if (v > worst) {
                    worst = v;
                    row = i;
                }
            }
            if (row < 0) return LpStatus::Optimal;

            const Index leaving = basis_[static_cast<std::size_t>(row)];
            const bool to_lower = x_(leaving) < 0;
            const VectorType d = reduced_costs(cost);
            const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> alpha = binv_.row(row) * work_;

            Index entering = -1;
            Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
            Scalar best_size = 0;
            for (Index j = 0; j < total_; ++j) {
                const State s = state_[static_cast<std::size_t>(j)];
                if (s == State::Basic || ub_(j) <= 0) continue;
                const Scalar a = alpha(j);
                if (std::abs(a) <= options_.pivot_tol) continue;
                // x_leaving moves by -a * dx_j; it must rise when below and fall when above
                const bool increases = s == State::Lower;
                const bool helps = to_lower ? (increases ? a < 0 : a > 0) : (increases ? a > 0 : a < 0);
                if (!helps) continue;
                const Scalar dj = increases ? std::max(d(j), Scalar(0)) : std::max(-d(j), Scalar(0));
                const Scalar ratio = dj / std::abs(a);
                if (ratio < best_ratio - Scalar(1e-12) ||
                    (ratio <= best_ratio + Scalar(1e-12) && std::abs(a) > best_size)) {
                    best_ratio = ratio;
                    best_size = std::abs(a);
                    entering = j;
                }
            }
            if (entering < 0) return LpStatus::Infeasible;

            ++iterations_;
            const VectorType w = binv_ * work_.col(entering);
            const Scalar target = to_lower ? Scalar(0) : ub_(leaving);
            const Scalar step = (x_(leaving) - target) / w(row);
            for (Index i = 0; i < m_; ++i) x_(basis_[static_cast<std::size_t>(i)]) -= step * w(i);
            x_(entering) += step;
            state_[static_cast<std::size_t>(leaving)] = to_lower ? State::Lower : State::Upper;
            x_(leaving) = target;
            state_[static_cast<std::size_t>(entering)] = State::Basic;
            basis_[static_cast<std::size_t>(row)] = entering;
            pivot(row, w);
        }
    }


    void refactor() {
        if (m_ == 0) return;
        MatrixType basis_matrix(m_, m_);
        for (Index i = 0; i < m_; ++i) basis_matrix.col(i) = work_.col(basis_[static_cast<std::size_t>(i)]);
        binv_ = basis_matrix.partialPivLu().inverse();
        update_basic_values();
        pivots_since_refactor_ = 0;
    }

    void update_basic_values() {
        if (m_ == 0) return;
        VectorType residual = rhs_;
        for (Index j = 0; j < total_; ++j)
            if (state_[static_cast<std::size_t>(j)] != State::Basic && x_(j) != 0) residual -= work_.col(j) * x_(j);
        const VectorType xb = binv_ * residual;
        for (Index i = 0; i < m_; ++i) x_(basis_[static_cast<std::size_t>(i)]) = xb(i);
    }

    void pivot(Index row, const VectorType& column) {
        const Scalar p = column(row);
        binv_.row(row) /= p;
        for (Index i = 0; i < m_; ++i) {
            if (i == row || column(i) == 0) continue;
            binv_.row(i) -= column(i) * binv_.row(row);
        }
        if (++pivots_since_refactor_ >= options_.refactor_interval) refactor();
    }

    LpStatus iterate(const VectorType& cost) {
        Index degenerate_run = 0;
        while (true) {
            if (iterations_ >= options_.max_iterations) return LpStatus::IterationLimit;

            VectorType cb(m_);
            for (Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
            const VectorType y = binv_.transpose() * cb;
            const bool bland = degenerate_run > options_.degenerate_switch;

            Index entering = -1;
            Scalar best_score = 0;
            for (Index j = 0; j < total_; ++j) {
                const State s = state_[static_cast<std::size_t>(j)];
                if (s == State::Basic || ub_(j) <= 0) continue;
                const Scalar d = cost(j) - y.dot(work_.col(j));
                Scalar score = 0;
                if (s == State::Lower && d < -options_.optimality_tol) score = -d;
                else if (s == State::Upper && d > options_.optimality_tol) score = d;
                else continue;
                if (bland) {
                    entering = j;
                    break;
                }
                if (score > best_score) {
                    best_score = score;
                    entering = j;
                }
            }
            if (entering < 0) return LpStatus::Optimal;

            const Scalar direction = state_[static_cast<std::size_t>(entering)] == State::Lower ? Scalar(1) : Scalar(-1);
            const VectorType w = binv_ * work_.col(entering);

            Scalar theta = ub_(entering);
            Index leaving_row = -1;
            bool leaving_to_upper = false;
            Scalar leaving_size = 0;
            for (Index i = 0; i < m_; ++i) {
                const Scalar delta = direction * w(i);
                const Index var = basis_[static_cast<std::size_t>(i)];
                Scalar limit;
                bool to_upper;
                if (delta > options_.pivot_tol) {
                    limit = x_(var) / delta;
                    to_upper = false;
                } else if (delta < -options_.pivot_tol && std::isfinite(static_cast<double>(ub_(var)))) {
                    limit = (ub_(var) - x_(var)) / (-delta);
                    to_upper = true;
                } else {
                    continue;
                }
                limit = std::max(limit, Scalar(0));
                bool take = false;
                if (leaving_row < 0 || limit < theta - Scalar(1e-12)) {
                    take = limit <= theta;
                } else if (std::abs(limit - theta) <= Scalar(1e-12)) {
                    take = bland ? var < basis_[static_cast<std::size_t>(leaving_row)]
                                 : std::abs(delta) > leaving_size;
                }
                if (take) {
                    theta = limit;
                    leaving_row = i;
                    leaving_to_upper = to_upper;
                    leaving_size = std::abs(delta);
                }
            }

            if (!std::isfinite(static_cast<double>(theta))) return LpStatus::Unbounded;

            ++iterations_;
            degenerate_run = theta <= Scalar(1e-12) ? degenerate_run + 1 : 0;

            if (theta != 0) {
                for (Index i = 0; i < m_; ++i) x_(basis_[static_cast<std::size_t>(i)]) -= theta * direction * w(i);
                x_(entering) += direction * theta;
            }

            if (leaving_row < 0) {
                // bound flip
                auto& s = state_[static_cast<std::size_t>(entering)];
                s = s == State::Lower ? State::Upper : State::Lower;
                x_(entering) = s == State::Lower ? Scalar(0) : ub_(entering);
                continue;
            }

            const Index leaving = basis_[static_cast<std::size_t>(leaving_row)];
            state_[static_cast<std::size_t>(leaving)] = leaving_to_upper ? State::Upper : State::Lower;
            x_(leaving) = leaving_to_upper ? ub_(leaving) : Scalar(0);
            state_[static_cast<std::size_t>(entering)] = State::Basic;
            basis_[static_cast<std::size_t>(leaving_row)] = entering;
            pivot(leaving_row, w);
        }
    }

    void drive_out_artificials() {
        for (Index r = 0; r < m_; ++r) {
            const Index var = basis_[static_cast<std::size_t>(r)];
            if (var < n_) continue;
            Index best = -1;
            Scalar best_size = options_.pivot_tol;
            for (Index j = 0; j < n_; ++j) {
                if (state_[static_cast<std::size_t>(j)] == State::Basic) continue;
                const Scalar size = std::abs(binv_.row(r).dot(work_.col(j)));
                if (size > best_size) {
                    best_size = size;
                    best = j;
                }
            }
            if (best < 0) continue;  // redundant row
            const VectorType w = binv_ * work_.col(best);
            state_[static_cast<std::size_t>(var)] = State::Lower;
            x_(var) = 0;
            state_[static_cast<std::size_t>(best)] = State::Basic;
            basis_[static_cast<std::size_t>(r)] = best;
            pivot(r, w);
            refactor();
        }
    }

    Options options_{};
    Index m_ = 0;
    Index n_ = 0;
    Index total_ = 0;
    Index iterations_ = 0;
    Index pivots_since_refactor_ = 0;
    MatrixType work_;
    VectorType rhs_;
    VectorType row_sign_;
    VectorType ub_;
    VectorType x_;
    MatrixType binv_;
    std::vector<State> state_;
    std::vector<Index> basis_;
};

} // namespace mirlab
