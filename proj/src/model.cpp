#include "mirlab/model.hpp"

#include "mirlab/errors.hpp"

#include <cmath>

namespace mirlab {

const char* to_string(RowSense sense) {
    switch (sense) {
    case RowSense::Less: return "L";
    case RowSense::Greater: return "G";
    case RowSense::Equal: return "E";
    }
    return "?";
}

void GeneralMip::validate() const {
    const auto m = static_cast<std::size_t>(num_rows());
    const auto n = static_cast<std::size_t>(num_cols());
    if (static_cast<std::size_t>(rhs.size()) != m || senses.size() != m)
        throw ShapeError("row data does not match coefficient rows");
    if (static_cast<std::size_t>(cost.size()) != n || static_cast<std::size_t>(lower.size()) != n ||
        static_cast<std::size_t>(upper.size()) != n || integer.size() != n)
        throw ShapeError("column data does not match coefficient columns");
    if (!coefficients.allFinite() || !rhs.allFinite() || !cost.allFinite())
        throw ShapeError("non-finite coefficient");
    for (Index j = 0; j < num_cols(); ++j) {
        if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) > upper(j))
            throw ShapeError("inconsistent bounds on column " + std::to_string(j));
    }
}

Vector MipInstance::int_upper_bounds() const {
    Vector ub = Vector::Constant(num_int_vars(), kInf);
    for (std::size_t r = 0; r < row_meta.size(); ++r) {
        const auto& meta = row_meta[r];
        if (!meta.bound_of) continue;
        for (Index j = 0; j < num_int_vars(); ++j)
            if (int_source[static_cast<std::size_t>(j)] == *meta.bound_of)
                ub(j) = std::min(ub(j), b(static_cast<Index>(r)));
    }
    return ub;
}

Vector MipInstance::cont_upper_bounds() const {
    Vector ub = Vector::Constant(num_cont_vars(), kInf);
    for (std::size_t r = 0; r < row_meta.size(); ++r) {
        const auto& meta = row_meta[r];
        if (!meta.bound_of) continue;
        for (Index j = 0; j < num_cont_vars(); ++j)
            if (cont_source[static_cast<std::size_t>(j)] == meta.bound_of)
                ub(j) = std::min(ub(j), b(static_cast<Index>(r)));
    }
    return ub;
}

Vector MipInstance::cost() const {
    Vector d(num_cols());
    d << f, g;
    return d;
}

GeneralMip MipInstance::as_general() const {
    GeneralMip out;
    out.name = name;
    const Index m = num_rows();
    const Index n = num_int_vars();
    const Index p = num_cont_vars();
    out.coefficients.resize(m, n + p);
    out.coefficients << A, C;
    out.rhs = b;
    out.senses.assign(static_cast<std::size_t>(m), RowSense::Equal);
    out.cost = cost();
    out.lower = Vector::Zero(n + p);
    out.upper = Vector::Constant(n + p, kInf);
    out.integer.assign(static_cast<std::size_t>(n + p), 0);
    for (Index j = 0; j < n; ++j) out.integer[static_cast<std::size_t>(j)] = 1;
    return out;
}

void MipInstance::validate() const {
    const Index m = A.rows();
    if (C.rows() != m || b.size() != m || static_cast<Index>(row_meta.size()) != m)
        throw ShapeError("row dimensions of A, C, b and row_meta disagree");
    if (f.size() != A.cols() || g.size() != C.cols())
        throw ShapeError("cost vectors do not match column counts");
    if (static_cast<Index>(int_source.size()) != A.cols() ||
        static_cast<Index>(cont_source.size()) != C.cols())
        throw ShapeError("column provenance does not match column counts");
    if (!A.allFinite() || !C.allFinite() || !b.allFinite() || !f.allFinite() || !g.allFinite())
        throw ShapeError("non-finite instance data");
}

Vector Point::stacked() const {
    Vector out(x.size() + v.size());
    out << x, v;
    return out;
}

Point Point::split(const MipInstance& instance, const Eigen::Ref<const Vector>& stacked) {
    const Index n = instance.num_int_vars();
    const Index p = instance.num_cont_vars();
    if (stacked.size() < n + p) throw ShapeError("stacked point shorter than instance columns");
    return Point{stacked.head(n), stacked.segment(n, p)};
}

MipInstance to_standard_form(const GeneralMip& general) {
    general.validate();
    const Index m = general.num_rows();
    const Index cols = general.num_cols();

    for (Index j = 0; j < cols; ++j) {
        const std::string label =
            general.col_names.size() == static_cast<std::size_t>(cols) ? general.col_names[static_cast<std::size_t>(j)]
                                                                       : "column " + std::to_string(j);
        if (general.lower(j) == -kInf)
            throw UnsupportedVariableDomain(label + " is unbounded below");
        if (general.lower(j) != 0.0)
            throw UnsupportedVariableDomain(label + " has a nonzero lower bound");
    }

    MipInstance out;
    out.name = general.name;
    out.negated_objective = general.maximize;
    const double sign = general.maximize ? -1.0 : 1.0;

    std::vector<Index> structural_cont;
    for (Index j = 0; j < cols; ++j) {
        if (general.integer[static_cast<std::size_t>(j)])
            out.int_source.push_back(j);
        else
            structural_cont.push_back(j);
    }
    std::vector<Index> bounded;
    for (Index j = 0; j < cols; ++j)
        if (general.upper(j) < kInf) bounded.push_back(j);

    Index inequality_rows = 0;
    for (auto s : general.senses)
        if (s != RowSense::Equal) ++inequality_rows;

    const Index n = static_cast<Index>(out.int_source.size());
    const Index total_rows = m + static_cast<Index>(bounded.size());
    const Index p = static_cast<Index>(structural_cont.size()) + inequality_rows + static_cast<Index>(bounded.size());

    out.A = Matrix::Zero(total_rows, n);
    out.C = Matrix::Zero(total_rows, p);
    out.b = Vector::Zero(total_rows);
    out.f = Vector::Zero(n);
    out.g = Vector::Zero(p);
    out.row_meta.resize(static_cast<std::size_t>(total_rows));

    // column position of each general column in [x; v]
    std::vector<std::pair<bool, Index>> place(static_cast<std::size_t>(cols));
    for (Index j = 0; j < n; ++j) {
        const Index src = out.int_source[static_cast<std::size_t>(j)];
        place[static_cast<std::size_t>(src)] = {true, j};
        out.f(j) = sign * general.cost(src);
    }
    for (std::size_t k = 0; k < structural_cont.size(); ++k) {
        const Index src = structural_cont[k];
        place[static_cast<std::size_t>(src)] = {false, static_cast<Index>(k)};
        out.cont_source.emplace_back(src);
        out.g(static_cast<Index>(k)) = sign * general.cost(src);
    }

    auto put = [&](Index row, Index src, double value) {
        const auto [is_int, col] = place[static_cast<std::size_t>(src)];
        if (is_int)
            out.A(row, col) = value;
        else
            out.C(row, col) = value;
    };

    Index next_slack = static_cast<Index>(structural_cont.size());
    for (Index r = 0; r < m; ++r) {
        for (Index j = 0; j < cols; ++j)
            if (general.coefficients(r, j) != 0.0) put(r, j, general.coefficients(r, j));
        out.b(r) = general.rhs(r);
        auto& meta = out.row_meta[static_cast<std::size_t>(r)];
        meta.sense = general.senses[static_cast<std::size_t>(r)];
        meta.source_row = r;
        if (meta.sense != RowSense::Equal) {
            out.C(r, next_slack) = meta.sense == RowSense::Less ? 1.0 : -1.0;
            meta.slack = next_slack;
            out.cont_source.emplace_back(std::nullopt);
            ++next_slack;
        }
    }
    for (std::size_t k = 0; k < bounded.size(); ++k) {
        const Index r = m + static_cast<Index>(k);
        const Index src = bounded[k];
        put(r, src, 1.0);
        out.C(r, next_slack) = 1.0;
        out.b(r) = general.upper(src);
        auto& meta = out.row_meta[static_cast<std::size_t>(r)];
        meta.sense = RowSense::Less;
        meta.bound_of = src;
        meta.slack = next_slack;
        out.cont_source.emplace_back(std::nullopt);
        ++next_slack;
    }
    out.validate();
    return out;
}

RowView evaluate_row(const MipInstance& instance, Index row, const Point& point, const Vector& duals) {
    if (row < 0 || row >= instance.num_rows()) throw ShapeError("row index out of range");
    if (point.x.size() != instance.num_int_vars() || point.v.size() != instance.num_cont_vars())
        throw ShapeError("point does not match instance dimensions");
    if (duals.size() != 0 && duals.size() < instance.num_rows())
        throw ShapeError("dual vector shorter than row count");

    const auto& meta = instance.row_meta[static_cast<std::size_t>(row)];
    RowView view;
    view.row = row;
    view.int_coeffs = instance.A.row(row);
    view.cont_coeffs = instance.C.row(row);
    if (meta.slack) view.cont_coeffs(*meta.slack) = 0.0;
    view.rhs = instance.b(row);
    view.sense = meta.sense;
    view.activity = view.int_coeffs.dot(point.x) + view.cont_coeffs.dot(point.v);
    view.slack = meta.sense == RowSense::Greater ? view.activity - view.rhs : view.rhs - view.activity;
    view.dual = duals.size() == 0 ? 0.0 : duals(row);
    return view;
}

double objective_value(const MipInstance& instance, const Point& point) {
    return instance.f.dot(point.x) + instance.g.dot(point.v);
}

bool is_integral(const Eigen::Ref<const Vector>& values, double tol) {
    for (Index i = 0; i < values.size(); ++i)
        if (std::abs(values(i) - std::round(values(i))) > tol) return false;
    return true;
}

} // namespace mirlab
