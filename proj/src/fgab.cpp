#include "ncchern/fgab.hpp"

#include "ncchern/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace ncchern {

namespace {

Integer floor_mod(const Integer& a, const Integer& d) {
    Integer r = a % d;
    if (r < 0)
        r += d;
    return r;
}

} // namespace

// ---------------------------------------------------------------- IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<Integer> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw ValidationError("IntMatrix: entry count " + std::to_string(entries_.size()) + " does not match " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_)
            throw ValidationError("IntMatrix: ragged rows");
        for (long long v : row)
            entries_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

std::vector<Integer> IntMatrix::column(std::size_t j) const {
    std::vector<Integer> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

std::vector<Integer> IntMatrix::row(std::size_t i) const {
    return {entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

bool IntMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Integer& v) { return v == 0; });
}

IntMatrix IntMatrix::hconcat(const IntMatrix& other) const {
    if (rows_ != other.rows_)
        throw ValidationError("IntMatrix::hconcat: row count mismatch");
    IntMatrix out(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j)
            out(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < other.cols_; ++j)
            out(i, cols_ + j) = other(i, j);
    }
    return out;
}

IntMatrix IntMatrix::columns(std::size_t first, std::size_t count) const {
    IntMatrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j)
            out(i, j) = (*this)(i, first + j);
    return out;
}

IntMatrix IntMatrix::rows_range(std::size_t first, std::size_t count) const {
    IntMatrix out(count, cols_);
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(i, j) = (*this)(first + i, j);
    return out;
}

std::vector<Integer> IntMatrix::apply(std::span<const Integer> x) const {
    if (x.size() != cols_)
        throw ValidationError("IntMatrix::apply: vector length mismatch");
    std::vector<Integer> y(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            y[i] += (*this)(i, j) * x[j];
    return y;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_)
        throw ValidationError("IntMatrix product: inner dimensions " + std::to_string(a.cols_) + " and " +
                              std::to_string(b.rows_) + " differ");
    IntMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Integer& aik = a(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
        throw ValidationError("IntMatrix sum: shape mismatch");
    IntMatrix c = a;
    for (std::size_t k = 0; k < c.entries_.size(); ++k)
        c.entries_[k] += b.entries_[k];
    return c;
}

IntMatrix operator-(const IntMatrix& a) {
    IntMatrix c = a;
    for (auto& v : c.entries_)
        v = -v;
    return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) { return a + (-b); }

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
        if (i)
            os << ',';
        os << '[';
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j)
                os << ',';
            os << (*this)(i, j);
        }
        os << ']';
    }
    os << ']';
    return os.str();
}

Integer determinant(const IntMatrix& m) {
    if (m.rows() != m.cols())
        throw ValidationError("determinant: matrix is not square");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    IntMatrix a = m;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0)
                ++p;
            if (p == n)
                return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------- SNF

namespace {

class SmithReducer {
public:
    explicit SmithReducer(const IntMatrix& m)
        : s_(m), u_(IntMatrix::identity(m.rows())), uinv_(IntMatrix::identity(m.rows())),
          v_(IntMatrix::identity(m.cols())) {}

    SmithForm run() {
        const std::size_t steps = std::min(s_.rows(), s_.cols());
        for (std::size_t t = 0; t < steps; ++t) {
            if (!reduce_at(t))
                break;
        }
        return {std::move(s_), std::move(u_), std::move(v_), std::move(uinv_)};
    }

private:
    // Returns false once the trailing block is entirely zero.
    bool reduce_at(std::size_t t) {
        for (;;) {
            std::size_t pi = 0, pj = 0;
            if (!find_pivot(t, pi, pj))
                return false;
            if (pi != t)
                swap_rows(t, pi);
            if (pj != t)
                swap_cols(t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < s_.rows(); ++i) {
                if (s_(i, t) == 0)
                    continue;
                add_row(i, t, -(s_(i, t) / s_(t, t)));
                if (s_(i, t) != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < s_.cols(); ++j) {
                if (s_(t, j) == 0)
                    continue;
                add_col(j, t, -(s_(t, j) / s_(t, t)));
                if (s_(t, j) != 0)
                    clean = false;
            }
            if (!clean)
                continue;

            // Divisor chain: pull a non-multiple into row t and go again.
            bool divisible = true;
            for (std::size_t i = t + 1; i < s_.rows() && divisible; ++i)
                for (std::size_t j = t + 1; j < s_.cols(); ++j)
                    if (s_(i, j) % s_(t, t) != 0) {
                        add_row(t, i, 1);
                        divisible = false;
                        break;
                    }
            if (!divisible)
                continue;

            if (s_(t, t) < 0)
                negate_row(t);
            return true;
        }
    }

    bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
        bool found = false;
        Integer best;
        for (std::size_t i = t; i < s_.rows(); ++i)
            for (std::size_t j = t; j < s_.cols(); ++j) {
                const Integer& v = s_(i, j);
                if (v == 0)
                    continue;
                Integer a = abs(v);
                if (!found || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        return found;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < s_.cols(); ++j)
            std::swap(s_(a, j), s_(b, j));
        for (std::size_t j = 0; j < u_.cols(); ++j)
            std::swap(u_(a, j), u_(b, j));
        for (std::size_t i = 0; i < uinv_.rows(); ++i)
            std::swap(uinv_(i, a), uinv_(i, b));
    }

    // row_target += q * row_source
    void add_row(std::size_t target, std::size_t source, const Integer& q) {
        for (std::size_t j = 0; j < s_.cols(); ++j)
            s_(target, j) += q * s_(source, j);
        for (std::size_t j = 0; j < u_.cols(); ++j)
            u_(target, j) += q * u_(source, j);
        for (std::size_t i = 0; i < uinv_.rows(); ++i)
            uinv_(i, source) -= q * uinv_(i, target);
    }

    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < s_.cols(); ++j)
            s_(r, j) = -s_(r, j);
        for (std::size_t j = 0; j < u_.cols(); ++j)
            u_(r, j) = -u_(r, j);
        for (std::size_t i = 0; i < uinv_.rows(); ++i)
            uinv_(i, r) = -uinv_(i, r);
    }

    void swap_cols(std::size_t a, std::size_t b) {
        for (std::size_t i = 0; i < s_.rows(); ++i)
            std::swap(s_(i, a), s_(i, b));
        for (std::size_t i = 0; i < v_.rows(); ++i)
            std::swap(v_(i, a), v_(i, b));
    }

    // col_target += q * col_source
    void add_col(std::size_t target, std::size_t source, const Integer& q) {
        for (std::size_t i = 0; i < s_.rows(); ++i)
            s_(i, target) += q * s_(i, source);
        for (std::size_t i = 0; i < v_.rows(); ++i)
            v_(i, target) += q * v_(i, source);
    }

    IntMatrix s_, u_, uinv_, v_;
};

} // namespace

SmithForm snf(const IntMatrix& m) { return SmithReducer(m).run(); }

// ---------------------------------------------------------------- FgAbGroup

FgAbGroup::FgAbGroup(std::size_t free_rank, std::vector<Integer> invariant_factors)
    : free_rank_(free_rank), factors_(std::move(invariant_factors)) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (factors_[i] < 2)
            throw ValidationError("FgAbGroup: invariant factor " + factors_[i].str() + " is < 2");
        if (i > 0 && factors_[i] % factors_[i - 1] != 0)
            throw ValidationError("FgAbGroup: " + factors_[i - 1].str() + " does not divide " + factors_[i].str());
    }
}

FgAbGroup FgAbGroup::cyclic(const Integer& order) {
    Integer o = order;
    return from_cyclic_orders(std::span<const Integer>(&o, 1));
}

FgAbGroup FgAbGroup::from_cyclic_orders(std::span<const Integer> orders) {
    const std::size_t n = orders.size();
    std::vector<std::size_t> nonzero;
    for (std::size_t i = 0; i < n; ++i)
        if (orders[i] != 0)
            nonzero.push_back(i);
    IntMatrix r(n, nonzero.size());
    for (std::size_t k = 0; k < nonzero.size(); ++k)
        r(nonzero[k], k) = abs(orders[nonzero[k]]);
    return quotient_of_lattice(n, r).group;
}

Integer FgAbGroup::generator_order(std::size_t j) const {
    if (j < free_rank_)
        return 0;
    return factors_.at(j - free_rank_);
}

IntMatrix FgAbGroup::relations() const {
    IntMatrix r(generator_count(), factors_.size());
    for (std::size_t k = 0; k < factors_.size(); ++k)
        r(free_rank_ + k, k) = factors_[k];
    return r;
}

void FgAbGroup::reduce(std::span<Integer> coords) const {
    for (std::size_t k = 0; k < factors_.size(); ++k)
        coords[free_rank_ + k] = floor_mod(coords[free_rank_ + k], factors_[k]);
}

bool FgAbGroup::is_zero_element(std::span<const Integer> coords) const {
    if (coords.size() != generator_count())
        throw ValidationError("FgAbGroup: element has wrong number of coordinates");
    for (std::size_t j = 0; j < free_rank_; ++j)
        if (coords[j] != 0)
            return false;
    for (std::size_t k = 0; k < factors_.size(); ++k)
        if (coords[free_rank_ + k] % factors_[k] != 0)
            return false;
    return true;
}

std::string FgAbGroup::to_string() const {
    if (is_trivial())
        return "0";
    std::string out;
    if (free_rank_ > 0)
        out = free_rank_ == 1 ? std::string("Z") : "Z^" + std::to_string(free_rank_);
    for (const auto& d : factors_) {
        if (!out.empty())
            out += " + ";
        out += "Z/" + d.str();
    }
    return out;
}

// ---------------------------------------------------------------- GroupHom

GroupHom::GroupHom(FgAbGroup domain, FgAbGroup codomain, IntMatrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != codomain_.generator_count() || matrix_.cols() != domain_.generator_count())
        throw ValidationError("GroupHom: matrix is " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()) + " but " + domain_.to_string() + " -> " +
                              codomain_.to_string() + " needs " + std::to_string(codomain_.generator_count()) + "x" +
                              std::to_string(domain_.generator_count()));
    for (std::size_t j = 0; j < matrix_.cols(); ++j) {
        const Integer d = domain_.generator_order(j);
        if (d == 0)
            continue;
        std::vector<Integer> col = matrix_.column(j);
        for (auto& v : col)
            v *= d;
        if (!codomain_.is_zero_element(col))
            throw ValidationError("GroupHom: generator " + std::to_string(j) + " has order " + d.str() +
                                  " but its image does not");
    }
    for (std::size_t k = 0; k < codomain_.invariant_factors().size(); ++k) {
        const std::size_t i = codomain_.free_rank() + k;
        for (std::size_t j = 0; j < matrix_.cols(); ++j)
            matrix_(i, j) = floor_mod(matrix_(i, j), codomain_.invariant_factors()[k]);
    }
}

GroupHom GroupHom::zero(const FgAbGroup& domain, const FgAbGroup& codomain) {
    return GroupHom(domain, codomain, IntMatrix::zero(codomain.generator_count(), domain.generator_count()));
}

GroupHom GroupHom::identity(const FgAbGroup& group) {
    return GroupHom(group, group, IntMatrix::identity(group.generator_count()));
}

std::vector<Integer> GroupHom::apply(std::span<const Integer> x) const {
    std::vector<Integer> y = matrix_.apply(x);
    codomain_.reduce(y);
    return y;
}

// ---------------------------------------------------------------- quotients

Quotient quotient_of_lattice(std::size_t n, const IntMatrix& relations) {
    if (relations.rows() != n)
        throw ValidationError("quotient_of_lattice: relation matrix has wrong row count");
    const SmithForm f = snf(relations);
    const std::size_t diag = std::min(n, relations.cols());

    std::vector<std::size_t> free_idx, torsion_idx;
    std::vector<Integer> factors;
    for (std::size_t i = 0; i < n; ++i) {
        const Integer d = i < diag ? f.diagonal(i, i) : Integer(0);
        if (d == 0) {
            free_idx.push_back(i);
        } else if (d != 1) {
            torsion_idx.push_back(i);
            factors.push_back(d);
        }
    }
    Quotient q;
    q.group = FgAbGroup(free_idx.size(), factors);
    std::vector<std::size_t> kept = free_idx;
    kept.insert(kept.end(), torsion_idx.begin(), torsion_idx.end());

    q.projection = IntMatrix(kept.size(), n);
    q.lift = IntMatrix(n, kept.size());
    for (std::size_t g = 0; g < kept.size(); ++g)
        for (std::size_t j = 0; j < n; ++j) {
            q.projection(g, j) = f.left(kept[g], j);
            q.lift(j, g) = f.left_inverse(j, kept[g]);
        }
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const std::size_t g = free_idx.size() + k;
        for (std::size_t j = 0; j < n; ++j)
            q.projection(g, j) = floor_mod(q.projection(g, j), factors[k]);
    }
    return q;
}

Quotient cokernel_presentation(const GroupHom& h) {
    const FgAbGroup& cod = h.codomain();
    return quotient_of_lattice(cod.generator_count(), h.matrix().hconcat(cod.relations()));
}

FgAbGroup cokernel(const GroupHom& h) { return cokernel_presentation(h).group; }

Kernel kernel(const GroupHom& h) {
    const FgAbGroup& dom = h.domain();
    const FgAbGroup& cod = h.codomain();
    const std::size_t m = dom.generator_count();

    // x is in the kernel iff M x lies in the span of the codomain relations.
    const IntMatrix a = h.matrix().hconcat(-cod.relations());
    const SmithForm fa = snf(a);
    std::size_t rank = 0;
    while (rank < std::min(a.rows(), a.cols()) && fa.diagonal(rank, rank) != 0)
        ++rank;
    const IntMatrix spanning = fa.right.columns(rank, a.cols() - rank).rows_range(0, m);

    // Basis of the lattice spanned by `spanning`.
    const SmithForm fs = snf(spanning);
    std::size_t lattice_rank = 0;
    while (lattice_rank < std::min(spanning.rows(), spanning.cols()) && fs.diagonal(lattice_rank, lattice_rank) != 0)
        ++lattice_rank;
    IntMatrix basis(m, lattice_rank);
    for (std::size_t j = 0; j < lattice_rank; ++j)
        for (std::size_t i = 0; i < m; ++i)
            basis(i, j) = fs.left_inverse(i, j) * fs.diagonal(j, j);

    // Domain relations expressed in that basis.
    const IntMatrix dom_rel = dom.relations();
    const IntMatrix transformed = fs.left * dom_rel;
    IntMatrix coords(lattice_rank, dom_rel.cols());
    for (std::size_t j = 0; j < dom_rel.cols(); ++j) {
        for (std::size_t i = 0; i < lattice_rank; ++i) {
            const Integer& s = fs.diagonal(i, i);
            if (transformed(i, j) % s != 0)
                throw ValidationError("kernel: domain relation outside the kernel lattice (ill-defined hom)");
            coords(i, j) = transformed(i, j) / s;
        }
        for (std::size_t i = lattice_rank; i < m; ++i)
            if (transformed(i, j) != 0)
                throw ValidationError("kernel: domain relation outside the kernel lattice (ill-defined hom)");
    }

    const Quotient q = quotient_of_lattice(lattice_rank, coords);
    IntMatrix incl = basis * q.lift;
    // Orient free generators so the first nonzero coordinate is positive.
    for (std::size_t g = 0; g < q.group.free_rank(); ++g) {
        for (std::size_t i = 0; i < m; ++i) {
            if (incl(i, g) == 0)
                continue;
            if (incl(i, g) < 0)
                for (std::size_t r = 0; r < m; ++r)
                    incl(r, g) = -incl(r, g);
            break;
        }
    }
    return {q.group, GroupHom(q.group, dom, std::move(incl))};
}

FgAbGroup image(const GroupHom& h) { return cokernel(kernel(h).inclusion); }

GroupHom compose(const GroupHom& g, const GroupHom& h) {
    if (!(h.codomain() == g.domain()))
        throw ValidationError("compose: codomain " + h.codomain().to_string() + " does not match domain " +
                              g.domain().to_string());
    return GroupHom(h.domain(), g.codomain(), g.matrix() * h.matrix());
}

Quotient direct_sum_presentation(std::span<const FgAbGroup> groups) {
    std::size_t n = 0, rels = 0;
    for (const auto& g : groups) {
        n += g.generator_count();
        rels += g.invariant_factors().size();
    }
    IntMatrix r(n, rels);
    std::size_t row = 0, col = 0;
    for (const auto& g : groups) {
        for (std::size_t k = 0; k < g.invariant_factors().size(); ++k)
            r(row + g.free_rank() + k, col + k) = g.invariant_factors()[k];
        row += g.generator_count();
        col += g.invariant_factors().size();
    }
    return quotient_of_lattice(n, r);
}

FgAbGroup direct_sum(std::span<const FgAbGroup> groups) { return direct_sum_presentation(groups).group; }

FgAbGroup direct_sum(std::initializer_list<FgAbGroup> groups) {
    return direct_sum(std::span<const FgAbGroup>(groups.begin(), groups.size()));
}

bool iso_check(const FgAbGroup& a, const FgAbGroup& b) { return a == b; }

bool in_image(const GroupHom& h, std::span<const Integer> x) {
    const Quotient q = cokernel_presentation(h);
    return q.group.is_zero_element(q.projection.apply(x));
}

// ---------------------------------------------------------------- parsing

FgAbGroup parse_group(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s += c;
    if (s.empty())
        throw ParseError("empty group expression");
    std::vector<Integer> orders;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t end = s.find('+', pos);
        if (end == std::string::npos)
            end = s.size();
        const std::string term = s.substr(pos, end - pos);
        auto number = [&](const std::string& digits) {
            if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(c); }))
                throw ParseError("bad group term '" + term + "'");
            return Integer(digits);
        };
        if (term == "0") {
        } else if (term == "Z") {
            orders.emplace_back(0);
        } else if (term.rfind("Z^", 0) == 0) {
            const Integer r = number(term.substr(2));
            for (Integer k = 0; k < r; ++k)
                orders.emplace_back(0);
        } else if (term.rfind("Z/", 0) == 0) {
            const Integer d = number(term.substr(2));
            if (d == 0)
                throw ParseError("Z/0 is not allowed; write Z");
            orders.push_back(d);
        } else {
            throw ParseError("bad group term '" + term + "'");
        }
        pos = end + 1;
    }
    return FgAbGroup::from_cyclic_orders(orders);
}

} // namespace ncchern
