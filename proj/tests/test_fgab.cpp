#include <catch2/catch_amalgamated.hpp>

#include "ncchern/errors.hpp"
#include "ncchern/fgab.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

using namespace ncchern;

namespace {

// Leibniz-free cofactor expansion; independent of the library's Bareiss code.
Integer cofactor_det(const std::vector<std::vector<Integer>>& a) {
    const std::size_t n = a.size();
    if (n == 0)
        return 1;
    if (n == 1)
        return a[0][0];
    Integer total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j] == 0)
            continue;
        std::vector<std::vector<Integer>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Integer> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j)
                    row.push_back(a[i][k]);
            minor.push_back(row);
        }
        const Integer term = a[0][j] * cofactor_det(minor);
        total += (j % 2 == 0) ? term : Integer(-term);
    }
    return total;
}

void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
             std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

// Invariant factors from determinantal divisors: d_k = g_k / g_{k-1}, where
// g_k is the gcd of all k x k minors.
std::vector<Integer> determinantal_invariants(const IntMatrix& m) {
    std::vector<Integer> out;
    Integer prev = 1;
    for (std::size_t k = 1; k <= std::min(m.rows(), m.cols()); ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(m.rows(), k, 0, cur, rs);
        subsets(m.cols(), k, 0, cur, cs);
        Integer g = 0;
        for (const auto& r : rs)
            for (const auto& c : cs) {
                std::vector<std::vector<Integer>> a(k, std::vector<Integer>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        a[i][j] = m(r[i], c[j]);
                g = gcd(g, abs(cofactor_det(a)));
            }
        if (g == 0) {
            out.resize(std::min(m.rows(), m.cols()), 0);
            return out;
        }
        out.push_back(g / prev);
        prev = g;
    }
    return out;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = d(rng);
    return m;
}

bool is_diagonal_chain(const IntMatrix& s) {
    const std::size_t n = std::min(s.rows(), s.cols());
    for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j)
            if (i != j && s(i, j) != 0)
                return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (s(i, i) < 0)
            return false;
        if (i + 1 < n) {
            if (s(i, i) == 0 && s(i + 1, i + 1) != 0)
                return false;
            if (s(i, i) != 0 && s(i + 1, i + 1) % s(i, i) != 0)
                return false;
        }
    }
    return true;
}

// Signature of a finite abelian group: for each k, #{x : k x = 0}. It
// determines the group up to isomorphism.
std::vector<std::int64_t> signature_from_orders(const std::vector<std::int64_t>& orders, std::int64_t up_to) {
    // Brute-force enumeration of all elements of the product of cyclic groups.
    std::int64_t total = 1;
    for (auto o : orders)
        total *= o;
    std::vector<std::int64_t> sig(static_cast<std::size_t>(up_to + 1), 0);
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::vector<std::int64_t> x;
        std::int64_t rest = idx;
        for (auto o : orders) {
            x.push_back(rest % o);
            rest /= o;
        }
        for (std::int64_t k = 1; k <= up_to; ++k) {
            bool zero = true;
            for (std::size_t i = 0; i < x.size(); ++i)
                if ((k * x[i]) % orders[i] != 0)
                    zero = false;
            if (zero)
                ++sig[static_cast<std::size_t>(k)];
        }
    }
    return sig;
}

} // namespace

TEST_CASE("snf examples") {
    SECTION("identity") {
        const SmithForm f = snf(IntMatrix::identity(2));
        CHECK(f.diagonal == IntMatrix::identity(2));
        CHECK(f.left == IntMatrix::identity(2));
        CHECK(f.right == IntMatrix::identity(2));
    }
    SECTION("difference map on K1 of the torus") {
        const IntMatrix m{{0, -2}, {-1, -1}};
        const SmithForm f = snf(m);
        // Oracle: gcd of entries is 1, |det| = 2.
        CHECK(determinantal_invariants(m) == std::vector<Integer>{1, 2});
        CHECK(f.diagonal == IntMatrix{{1, 0}, {0, 2}});
        CHECK(f.left * m * f.right == f.diagonal);
    }
    SECTION("zero 2x3") {
        const SmithForm f = snf(IntMatrix::zero(2, 3));
        CHECK(f.diagonal == IntMatrix::zero(2, 3));
        CHECK(abs(determinant(f.left)) == 1);
        CHECK(abs(determinant(f.right)) == 1);
    }
    SECTION("empty shapes are total") {
        for (auto [r, c] : {std::pair{0, 0}, std::pair{0, 3}, std::pair{2, 0}}) {
            const IntMatrix m = IntMatrix::zero(r, c);
            const SmithForm f = snf(m);
            CHECK(f.left * m * f.right == f.diagonal);
            CHECK(f.left.rows() == static_cast<std::size_t>(r));
            CHECK(f.right.rows() == static_cast<std::size_t>(c));
        }
    }
}

TEST_CASE("snf property: random matrices match determinantal divisors") {
    std::mt19937_64 rng(20240917);
    std::uniform_int_distribution<int> dim(0, 6);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t r = dim(rng), c = dim(rng);
        const IntMatrix m = random_matrix(rng, r, c, -9, 9);
        const SmithForm f = snf(m);
        INFO(m.to_string());
        REQUIRE(f.left * m * f.right == f.diagonal);
        REQUIRE(abs(determinant(f.left)) == 1);
        REQUIRE(abs(determinant(f.right)) == 1);
        REQUIRE(f.left * f.left_inverse == IntMatrix::identity(r));
        REQUIRE(is_diagonal_chain(f.diagonal));
        if (r <= 5 && c <= 5) {
            std::vector<Integer> diag;
            for (std::size_t i = 0; i < std::min(r, c); ++i)
                diag.push_back(f.diagonal(i, i));
            REQUIRE(diag == determinantal_invariants(m));
        }
    }
}

TEST_CASE("snf survives pivot growth") {
    // Entries well beyond 64 bits.
    IntMatrix m(3, 3);
    const Integer big = Integer(1) << 100;
    m(0, 0) = big + 1;
    m(0, 1) = big;
    m(1, 0) = big * 3;
    m(1, 1) = big * 3 - 7;
    m(2, 2) = big * big;
    const SmithForm f = snf(m);
    CHECK(f.left * m * f.right == f.diagonal);
    CHECK(is_diagonal_chain(f.diagonal));
    CHECK(f.diagonal(0, 0) * f.diagonal(1, 1) * f.diagonal(2, 2) == abs(determinant(m)));
}

TEST_CASE("FgAbGroup construction and text") {
    CHECK_THROWS_AS(FgAbGroup(0, {4, 2}), ValidationError);
    CHECK_THROWS_AS(FgAbGroup(0, {1}), ValidationError);
    CHECK(FgAbGroup(1, {2}).to_string() == "Z + Z/2");
    CHECK(FgAbGroup(2, {}).to_string() == "Z^2");
    CHECK(FgAbGroup::trivial().to_string() == "0");
    CHECK(parse_group("Z^1+Z/2") == FgAbGroup(1, {2}));
    CHECK(parse_group("Z + Z/3 + Z/2") == FgAbGroup(1, {6}));
    CHECK(parse_group("0") == FgAbGroup::trivial());
    CHECK(parse_group("Z/1") == FgAbGroup::trivial());
    CHECK_THROWS_AS(parse_group("Q"), ParseError);
    CHECK_THROWS_AS(parse_group("Z/0"), ParseError);
    CHECK_THROWS_AS(parse_group("Z^+"), ParseError);
}

TEST_CASE("GroupHom validates torsion relations") {
    const FgAbGroup z2 = FgAbGroup::cyclic(2);
    const FgAbGroup z4 = FgAbGroup::cyclic(4);
    CHECK_NOTHROW(GroupHom(z2, z4, IntMatrix{{2}}));
    CHECK_THROWS_AS(GroupHom(z2, z4, IntMatrix{{1}}), ValidationError);
    CHECK_THROWS_AS(GroupHom(z2, FgAbGroup::free(1), IntMatrix{{1}}), ValidationError);
    CHECK_THROWS_AS(GroupHom(FgAbGroup::free(2), FgAbGroup::free(1), IntMatrix{{1}}), ValidationError);
    // Reduced into [0, d).
    CHECK(GroupHom(FgAbGroup::free(1), z4, IntMatrix{{-1}}).matrix() == IntMatrix{{3}});
}

TEST_CASE("cokernel examples") {
    const FgAbGroup z2free = FgAbGroup::free(2);
    CHECK(cokernel(GroupHom(z2free, z2free, IntMatrix{{0, -2}, {-1, -1}})) == FgAbGroup::cyclic(2));
    CHECK(cokernel(GroupHom(z2free, z2free, IntMatrix{{0, 2}, {-1, -1}})) == FgAbGroup::cyclic(2));
    // Oracle: image is spanned by (-1,0) and (1,0), i.e. Z + 0.
    const GroupHom d0(z2free, z2free, IntMatrix{{-1, 1}, {0, 0}});
    CHECK(in_image(d0, std::vector<Integer>{1, 0}));
    CHECK_FALSE(in_image(d0, std::vector<Integer>{0, 1}));
    CHECK(cokernel(d0) == FgAbGroup::free(1));
    CHECK(cokernel(GroupHom::identity(z2free)).is_trivial());
}

TEST_CASE("kernel examples") {
    const FgAbGroup z2free = FgAbGroup::free(2);
    const Kernel k = kernel(GroupHom(z2free, z2free, IntMatrix{{-1, 1}, {0, 0}}));
    CHECK(k.group == FgAbGroup::free(1));
    CHECK(k.inclusion.matrix() == IntMatrix{{1}, {1}});

    const GroupHom injective(z2free, z2free, IntMatrix{{0, -2}, {-1, -1}});
    CHECK(determinant(injective.matrix()) == -2);
    CHECK(kernel(injective).group.is_trivial());

    const FgAbGroup z = FgAbGroup::free(1);
    const Kernel kz = kernel(GroupHom::zero(z, z));
    CHECK(kz.group == z);
    CHECK(kz.inclusion.matrix() == IntMatrix::identity(1));

    // Z/4 -> Z/4, x -> 2x has kernel Z/2 generated by 2.
    const FgAbGroup z4 = FgAbGroup::cyclic(4);
    const Kernel k4 = kernel(GroupHom(z4, z4, IntMatrix{{2}}));
    CHECK(k4.group == FgAbGroup::cyclic(2));
    CHECK(k4.inclusion.matrix() == IntMatrix{{2}});
}

TEST_CASE("image examples") {
    const FgAbGroup z2free = FgAbGroup::free(2);
    CHECK(image(GroupHom(z2free, z2free, IntMatrix{{-1, 1}, {0, 0}})) == FgAbGroup::free(1));
    CHECK(image(GroupHom::zero(z2free, z2free)).is_trivial());
    const FgAbGroup z = FgAbGroup::free(1);
    CHECK(image(GroupHom(z, z, IntMatrix{{2}})) == z);
    // Z -> Z/6, 1 -> 2 has image of order 3.
    CHECK(image(GroupHom(z, FgAbGroup::cyclic(6), IntMatrix{{2}})) == FgAbGroup::cyclic(3));
}

TEST_CASE("compose") {
    const FgAbGroup z = FgAbGroup::free(1);
    const GroupHom h(FgAbGroup::free(2), z, IntMatrix{{3, -1}});
    CHECK(compose(GroupHom::identity(z), h) == h);
    CHECK(compose(h, GroupHom::zero(z, FgAbGroup::free(2))).is_zero());
    CHECK(compose(GroupHom(z, z, IntMatrix{{2}}), GroupHom(z, z, IntMatrix{{3}})).matrix() == IntMatrix{{6}});
    CHECK_THROWS_AS(compose(h, h), ValidationError);
    // Reduction modulo codomain torsion.
    const GroupHom to_z4(z, FgAbGroup::cyclic(4), IntMatrix{{3}});
    CHECK(compose(to_z4, GroupHom(z, z, IntMatrix{{3}})).matrix() == IntMatrix{{1}});
}

TEST_CASE("direct sum and iso_check") {
    CHECK(direct_sum({FgAbGroup::free(1), FgAbGroup::cyclic(2)}) == FgAbGroup(1, {2}));
    // CRT oracle: gcd(2,3) = 1 so Z/2 + Z/3 = Z/6.
    CHECK(std::gcd(2, 3) == 1);
    CHECK(direct_sum({FgAbGroup::cyclic(2), FgAbGroup::cyclic(3)}) == FgAbGroup::cyclic(6));
    const FgAbGroup g(2, {2, 4});
    CHECK(direct_sum({FgAbGroup::trivial(), g}) == g);
    CHECK(direct_sum({FgAbGroup(1, {6}), FgAbGroup(0, {4})}) == FgAbGroup(1, {2, 12}));

    CHECK(iso_check(FgAbGroup(1, {2}), FgAbGroup(1, {2})));
    CHECK_FALSE(iso_check(FgAbGroup::cyclic(4), direct_sum({FgAbGroup::cyclic(2), FgAbGroup::cyclic(2)})));
    CHECK(iso_check(direct_sum({FgAbGroup::cyclic(2), FgAbGroup::cyclic(3)}), FgAbGroup::cyclic(6)));

    const auto p = direct_sum_presentation(std::vector<FgAbGroup>{FgAbGroup::cyclic(2), FgAbGroup::free(1)});
    CHECK(p.group == FgAbGroup(1, {2}));
    CHECK(p.projection * p.lift == IntMatrix::identity(2));
}

TEST_CASE("iso_check agrees with brute-force enumeration for small finite groups") {
    // All multisets of cyclic orders with product <= 24.
    std::vector<std::vector<std::int64_t>> lists;
    std::vector<std::int64_t> cur;
    std::function<void(std::int64_t, std::int64_t)> gen = [&](std::int64_t min_order, std::int64_t product) {
        lists.push_back(cur);
        for (std::int64_t o = min_order; o * product <= 24; ++o) {
            cur.push_back(o);
            gen(o, product * o);
            cur.pop_back();
        }
    };
    gen(2, 1);
    std::vector<FgAbGroup> groups;
    std::vector<std::vector<std::int64_t>> sigs;
    for (const auto& l : lists) {
        std::vector<Integer> orders(l.begin(), l.end());
        groups.push_back(FgAbGroup::from_cyclic_orders(orders));
        sigs.push_back(signature_from_orders(l.empty() ? std::vector<std::int64_t>{1} : l, 24));
    }
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (std::size_t b = 0; b < groups.size(); ++b)
            REQUIRE(iso_check(groups[a], groups[b]) == (sigs[a] == sigs[b]));
}

TEST_CASE("cokernel of 2x2 matrices agrees with brute-force coset enumeration") {
    // Entries in [-5, 5]; every matrix with |det| <= 24 is checked.
    int checked = 0;
    for (int a = -5; a <= 5; ++a)
        for (int b = -5; b <= 5; ++b)
            for (int c = -5; c <= 5; ++c)
                for (int d = -5; d <= 5; ++d) {
                    const std::int64_t det = std::int64_t(a) * d - std::int64_t(b) * c;
                    if (std::abs(det) > 24)
                        continue;
                    ++checked;
                    const FgAbGroup free2 = FgAbGroup::free(2);
                    const FgAbGroup coker = cokernel(GroupHom(free2, free2, IntMatrix{{a, b}, {c, d}}));
                    if (det == 0) {
                        // Rank <= 1: Z^(2 - rank) + Z/content.
                        const std::int64_t content = std::gcd(std::gcd(a, b), std::gcd(c, d));
                        if (content == 0) {
                            REQUIRE(coker == FgAbGroup::free(2));
                        } else {
                            REQUIRE(coker.free_rank() == 1);
                            REQUIRE(coker == FgAbGroup::from_cyclic_orders(std::vector<Integer>{0, content}));
                        }
                        continue;
                    }
                    const std::int64_t n = std::abs(det);
                    // v in L iff adj(M) v is divisible by det.
                    auto in_lattice = [&](std::int64_t x, std::int64_t y) {
                        return (d * x - b * y) % det == 0 && (-c * x + a * y) % det == 0;
                    };
                    // The box [0,n)^2 covers every coset exactly n times.
                    for (std::int64_t k = 1; k <= n; ++k) {
                        std::int64_t hits = 0;
                        for (std::int64_t x = 0; x < n; ++x)
                            for (std::int64_t y = 0; y < n; ++y)
                                if (in_lattice(k * x, k * y))
                                    ++hits;
                        Integer expected = 1;
                        for (const auto& f : coker.invariant_factors())
                            expected *= gcd(Integer(k), f);
                        REQUIRE(coker.free_rank() == 0);
                        REQUIRE(Integer(hits / n) == expected);
                    }
                }
    CHECK(checked > 1000);
}

namespace {

FgAbGroup random_group(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> rank(0, 2), count(0, 2), order(2, 6);
    std::vector<Integer> orders(rank(rng), 0);
    for (int i = count(rng); i > 0; --i)
        orders.emplace_back(order(rng));
    return FgAbGroup::from_cyclic_orders(orders);
}

GroupHom random_hom(std::mt19937_64& rng, const FgAbGroup& dom, const FgAbGroup& cod) {
    std::uniform_int_distribution<int> entry(-4, 4);
    IntMatrix m(cod.generator_count(), dom.generator_count());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        const Integer dj = dom.generator_order(j);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const Integer ei = cod.generator_order(i);
            if (dj == 0) {
                m(i, j) = entry(rng);
            } else if (ei != 0) {
                // d x = 0 mod e  <=>  x is a multiple of e / gcd(d, e).
                m(i, j) = Integer(entry(rng)) * (ei / gcd(dj, ei));
            }
        }
    }
    return GroupHom(dom, cod, m);
}

} // namespace

TEST_CASE("kernel, image, cokernel properties on random homs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 400; ++trial) {
        const FgAbGroup dom = random_group(rng), cod = random_group(rng);
        const GroupHom h = random_hom(rng, dom, cod);
        INFO(dom.to_string() << " -> " << cod.to_string() << " " << h.matrix().to_string());
        const Kernel k = kernel(h);
        REQUIRE(compose(h, k.inclusion).is_zero());
        // Inclusion is injective.
        REQUIRE(kernel(k.inclusion).group.is_trivial());
        // Every kernel element of a small brute-force box is in the image of the inclusion.
        if (dom.generator_count() <= 2) {
            std::vector<Integer> x(dom.generator_count());
            std::function<void(std::size_t)> sweep = [&](std::size_t i) {
                if (i == x.size()) {
                    if (cod.is_zero_element(h.matrix().apply(x)))
                        REQUIRE(in_image(k.inclusion, x));
                    return;
                }
                for (int v = -6; v <= 6; ++v) {
                    x[i] = v;
                    sweep(i + 1);
                }
            };
            sweep(0);
        }
        if (cod.is_free()) {
            REQUIRE(cokernel(h).free_rank() == cod.free_rank() - image(h).free_rank());
        }
        // Image two ways: domain mod kernel, and kernel of the cokernel projection.
        const Quotient q = cokernel_presentation(h);
        REQUIRE(image(h) == kernel(GroupHom(cod, q.group, q.projection)).group);
    }
}
