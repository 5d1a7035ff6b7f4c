#include "pureshapes/determinants.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace pureshapes;
namespace det = pureshapes::determinants;

TEST_CASE("bareiss determinant on reference matrices") {
    CHECK(det::bareiss_det({{Int(2)}}) == 2);
    CHECK(det::bareiss_det({{Int(1), Int(3)}, {Int(2), Int(1)}}) == -5);
    CHECK(det::bareiss_det({{Int(0), Int(1)}, {Int(1), Int(0)}}) == -1);
    CHECK(det::bareiss_det({{Int(1), Int(2)}, {Int(2), Int(4)}}) == 0);
    // needs a pivot swap mid-elimination
    CHECK(det::bareiss_det({{Int(1), Int(1), Int(1)},
                            {Int(1), Int(1), Int(2)},
                            {Int(1), Int(2), Int(1)}}) == -1);
}

TEST_CASE("p=3 exponent matrix matches the hand computation") {
    auto m = det::jacobian_exponent_matrix(3);
    REQUIRE(m.size() == 2);
    CHECK(m[0] == std::vector<Int>{Int(-1), Int(1)});
    CHECK(m[1] == std::vector<Int>{Int(2), Int(0)});
    CHECK(abs(det::jacobian_det(3)) == 2);
}

TEST_CASE("p=5 matrix and determinant reproduce the worked example") {
    auto m = det::jacobian_exponent_matrix(5);
    REQUIRE(m.size() == 4);
    CHECK(m[0] == std::vector<Int>{Int(-3), Int(-1), Int(1), Int(3)});
    CHECK(m[1] == std::vector<Int>{Int(-1), Int(3), Int(-3), Int(1)});
    CHECK(m[2] == std::vector<Int>{Int(1), Int(0), Int(0), Int(1)});
    CHECK(m[3] == std::vector<Int>{Int(4), Int(-1), Int(3), Int(-4)});
    CHECK(abs(det::jacobian_det(5)) == 40);
    // 2^l * det of the l x l reduced block
    CHECK(abs(det::bareiss_det(det::lambda_block(5))) == 10);
    CHECK(abs(det::bareiss_det({{Int(1), Int(3)}, {Int(-3), Int(1)}})) == 10);
}

TEST_CASE("column sums are 1 and the reduction pipeline preserves det") {
    for (unsigned p : {3u, 5u, 7u, 11u, 13u}) {
        auto m = det::jacobian_exponent_matrix(p);
        for (size_t c = 0; c < m.size(); ++c) {
            Int s = 0;
            for (size_t r = 0; r < m.size(); ++r) s += m[r][c];
            CHECK(s == 1);
        }
        Int d0 = det::bareiss_det(det::jacobian_exponent_matrix(p));
        Int d1 = det::bareiss_det(det::cp_prime(p));
        Int d2 = det::bareiss_det(det::cp_double_prime(p));
        CHECK(d0 == d1);
        CHECK(d1 == d2);
        CHECK(abs(d0) == ipow(Int(2), (p - 1) / 2) * abs(det::bareiss_det(det::lambda_block(p))));
    }
}

TEST_CASE("Maillet determinants and minus class numbers") {
    auto c3 = det::maillet_class_number(3);
    CHECK(c3.maillet_det == 1);
    CHECK(c3.h_minus == 1);

    auto c5 = det::maillet_class_number(5);
    CHECK(c5.maillet_det == -5);
    CHECK(c5.h_minus == 1);

    CHECK(det::maillet_class_number(7).h_minus == 1);
    CHECK(det::maillet_class_number(19).h_minus == 1);
    CHECK(det::maillet_class_number(23).h_minus == 3);
    // larger reference values
    CHECK(det::maillet_class_number(29).h_minus == 8);
    CHECK(det::maillet_class_number(31).h_minus == 9);
    CHECK(det::maillet_class_number(37).h_minus == 37);

    CHECK_THROWS_AS(det::maillet_class_number(211), error);
}

TEST_CASE("analytic class number oracle agrees with the Maillet route") {
    for (unsigned p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 41u})
        CHECK(det::h_minus_analytic(p) == det::maillet_class_number(p).h_minus);
}

TEST_CASE("determinant identity across both routes, p <= 23") {
    for (unsigned p : {3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
        Int expect = ipow(Int(2), p - 2) * ipow(Int(p), (p - 3) / 2) *
                     det::maillet_class_number(p).h_minus;
        CHECK(abs(det::jacobian_det(p)) == expect);
    }
}

TEST_CASE("shadow matrices build recursively and always have det 2") {
    auto c2 = det::shadow_matrix(2);
    CHECK(c2 == det::IntMatrix{{Int(1), Int(-1)}, {Int(0), Int(2)}});
    auto c4 = det::shadow_matrix(4);
    CHECK(c4 == det::IntMatrix{{Int(1), Int(-1), Int(0), Int(0)},
                               {Int(1), Int(0), Int(0), Int(0)},
                               {Int(0), Int(0), Int(1), Int(-1)},
                               {Int(-1), Int(2), Int(0), Int(2)}});
    for (unsigned d = 2; d <= 32; d += 2) CHECK(det::shadow_jacobian_det(d) == 2);
    CHECK(det::shadow_jacobian_det(12) == 2);
    CHECK_THROWS_AS(det::shadow_jacobian_det(3), error);
}

TEST_CASE("composite-n jacobian values and prime consistency") {
    CHECK(det::composite_jacobian_det(9) == 46656);
    CHECK(det::composite_jacobian_det(15) == 46656000000LL);
    // the composite-n formula degenerates to the prime one on prime input
    for (unsigned p : {5u, 7u, 11u}) {
        auto a = det::lambda_block(p);
        auto b = det::composite_lambda_block(p);
        CHECK(a == b);
        Int via_formula = ipow(Int(2), (p - 1) / 2) * det::bareiss_det(b);
        CHECK(abs(via_formula) == abs(det::jacobian_det(p)));
    }
}
