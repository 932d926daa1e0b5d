#pragma once

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mirlab {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerance used whenever a value is tested for integrality.
inline constexpr double kIntegralityTol = 1e-6;

enum class RowSense { Less, Greater, Equal };

const char* to_string(RowSense sense);

/// A MIP as read from a file: arbitrary row senses and column bounds.
struct GeneralMip {
    std::string name;
    Matrix coefficients;            // rows x cols
    Vector rhs;
    std::vector<RowSense> senses;
    Vector cost;
    Vector lower;
    Vector upper;
    std::vector<char> integer;      // 1 for integer columns
    bool maximize = false;
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;

    Index num_rows() const { return coefficients.rows(); }
    Index num_cols() const { return coefficients.cols(); }

    /// Throws ShapeError on inconsistent dimensions or non-finite data.
    void validate() const;
};

/// Provenance of a standard-form row.
struct RowOrigin {
    RowSense sense = RowSense::Equal;
    std::optional<Index> source_row;  // row of the general model
    std::optional<Index> bound_of;    // general column whose upper bound this row encodes
    std::optional<Index> slack;       // continuous column holding this row's slack
};

/// min f'x + g'v  s.t.  Cv + Ax = b,  x, v >= 0,  x integer.
struct MipInstance {
    std::string name;
    Matrix A;   // rows x n, integer columns
    Matrix C;   // rows x p, continuous columns (slacks included)
    Vector b;
    Vector f;
    Vector g;
    std::vector<RowOrigin> row_meta;
    std::vector<Index> int_source;                   // general column of x_j
    std::vector<std::optional<Index>> cont_source;   // general column of v_j, empty for slacks
    bool negated_objective = false;                  // source model was a maximization

    Index num_int_vars() const { return A.cols(); }
    Index num_cont_vars() const { return C.cols(); }
    Index num_rows() const { return A.rows(); }
    Index num_cols() const { return A.cols() + C.cols(); }

    bool is_slack(Index cont) const { return !cont_source[static_cast<std::size_t>(cont)].has_value(); }

    /// Finite upper bounds implied by bound rows, +inf elsewhere.
    Vector int_upper_bounds() const;
    Vector cont_upper_bounds() const;

    /// Stacked cost vector [f; g].
    Vector cost() const;

    /// Same problem with columns ordered [x; v], every row an equality and every
    /// column in [0, inf).
    GeneralMip as_general() const;

    void validate() const;
};

struct Point {
    Vector x;
    Vector v;

    Vector stacked() const;
    static Point split(const MipInstance& instance, const Eigen::Ref<const Vector>& stacked);
};

/// One row of a standard-form instance evaluated at a point. Coefficients and
/// activity exclude the row's own slack column.
struct RowView {
    Index row = 0;
    Eigen::RowVectorXd int_coeffs;
    Eigen::RowVectorXd cont_coeffs;
    double rhs = 0.0;
    RowSense sense = RowSense::Equal;
    double activity = 0.0;
    double slack = 0.0;
    double dual = 0.0;
};

/// Adds one slack per inequality row and one bound row (plus slack) per finite
/// upper bound. Throws UnsupportedVariableDomain for lower bounds other than 0.
MipInstance to_standard_form(const GeneralMip& general);

/// `duals` may be empty, in which case the dual field is 0.
RowView evaluate_row(const MipInstance& instance, Index row, const Point& point,
                     const Vector& duals = Vector());

/// Objective f'x + g'v.
double objective_value(const MipInstance& instance, const Point& point);

bool is_integral(const Eigen::Ref<const Vector>& values, double tol = kIntegralityTol);

} // namespace mirlab
