#include <doctest.h>

#include <random>

#include "isar/sampling.hpp"

using namespace isar;

namespace {

ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ComplexMatrix m(r, c);
    for (auto& v : m.data) v = cplx{u(rng), u(rng)};
    return m;
}

}  // namespace

TEST_CASE("gen_mask pixel drops the exact count") {
    const auto mask = gen_mask(MaskKind::pixel, 0.30, 100, 100, 42);
    CHECK(mask.observed_count() == 10000 - 3000);
    CHECK(mask.missing_fraction() == doctest::Approx(0.30));

    const auto all = gen_mask(MaskKind::pixel, 0.0, 7, 9, 0);
    CHECK(all.observed_count() == 63);
}

TEST_CASE("gen_mask column drops whole columns") {
    const auto mask = gen_mask(MaskKind::column, 0.50, 10, 10, 5);
    std::size_t dead = 0, alive = 0;
    for (std::size_t c = 0; c < 10; ++c) {
        bool any = false, allc = true;
        for (std::size_t r = 0; r < 10; ++r) {
            if (mask.at(r, c)) any = true; else allc = false;
        }
        CHECK((any == allc));  // column is all-true or all-false
        if (any) ++alive; else ++dead;
    }
    CHECK(dead == 5);
    CHECK(alive == 5);
}

TEST_CASE("gen_mask compressed drops rows and columns independently") {
    const auto mask = gen_mask(MaskKind::compressed, 0.25, 8, 8, 9);
    std::size_t dead_rows = 0, dead_cols = 0;
    for (std::size_t r = 0; r < 8; ++r) {
        bool all_missing = true;
        for (std::size_t c = 0; c < 8; ++c) all_missing &= !mask.at(r, c);
        dead_rows += all_missing;
    }
    for (std::size_t c = 0; c < 8; ++c) {
        bool all_missing = true;
        for (std::size_t r = 0; r < 8; ++r) all_missing &= !mask.at(r, c);
        dead_cols += all_missing;
    }
    CHECK(dead_rows == 2);
    CHECK(dead_cols == 2);
}

TEST_CASE("gen_mask is reproducible and seed-sensitive") {
    const auto a = gen_mask(MaskKind::pixel, 0.5, 32, 32, 7);
    const auto b = gen_mask(MaskKind::pixel, 0.5, 32, 32, 7);
    const auto c = gen_mask(MaskKind::pixel, 0.5, 32, 32, 8);
    CHECK(a.observed == b.observed);
    CHECK(a.observed != c.observed);
}

TEST_CASE("gen_mask input validation") {
    CHECK_THROWS(gen_mask(MaskKind::pixel, -0.1, 4, 4, 0));
    CHECK_THROWS(gen_mask(MaskKind::pixel, 1.0, 4, 4, 0));
    CHECK_THROWS(gen_mask(MaskKind::pixel, 0.5, 0, 4, 0));
}

TEST_CASE("apply_mask") {
    ComplexMatrix m(2, 2);
    m.at(0, 0) = {1.0, 1.0};
    m.at(0, 1) = {2.0, 0.0};
    m.at(1, 0) = {3.0, 0.0};
    m.at(1, 1) = {4.0, -1.0};

    Mask mask;
    mask.rows = mask.cols = 2;
    mask.observed = {1, 1, 1, 0};
    const auto out = apply_mask(m, mask);
    CHECK(out.at(0, 0) == cplx{1.0, 1.0});
    CHECK(out.at(0, 1) == cplx{2.0, 0.0});
    CHECK(out.at(1, 0) == cplx{3.0, 0.0});
    CHECK(out.at(1, 1) == cplx{0.0, 0.0});

    // identity with all-true mask; idempotent
    mask.observed = {1, 1, 1, 1};
    const auto same = apply_mask(m, mask);
    for (std::size_t i = 0; i < 4; ++i) CHECK(same.data[i] == m.data[i]);
    mask.observed = {0, 0, 1, 0};
    const auto once = apply_mask(m, mask);
    const auto twice = apply_mask(once, mask);
    CHECK(once.data == twice.data);
    CHECK(once.at(1, 0) == cplx{3.0, 0.0});
    CHECK(std::abs(once.at(0, 0)) == 0.0);
}

TEST_CASE("apply_mask commutes with split_complex") {
    const auto m = random_matrix(6, 5, 77);
    const auto mask = gen_mask(MaskKind::pixel, 0.4, 6, 5, 3);
    RealMatrix re, im;
    split_complex(m, re, im);
    RealMatrix re2, im2;
    split_complex(apply_mask(m, mask), re2, im2);
    const auto re_masked = apply_mask(re, mask);
    const auto im_masked = apply_mask(im, mask);
    CHECK(re2.data == re_masked.data);
    CHECK(im2.data == im_masked.data);
}

TEST_CASE("pretransform round trip is bit exact") {
    const auto m = random_matrix(10, 10, 5);

    SUBCASE("all-true mask") {
        const auto mask = gen_mask(MaskKind::pixel, 0.0, 10, 10, 0);
        const auto pre = pretransform(m, mask, 3);
        const auto back = invert_pretransform(pre.matrix, pre.perm);
        for (std::size_t i = 0; i < m.data.size(); ++i) CHECK(back.data[i] == m.data[i]);
    }
    SUBCASE("column mask") {
        const auto mask = gen_mask(MaskKind::column, 0.5, 10, 10, 0);
        const auto masked = apply_mask(m, mask);
        const auto pre = pretransform(masked, mask, 0);
        CHECK(pre.mask.every_row_and_col_observed());
        CHECK(!mask.every_row_and_col_observed());
        const auto back = invert_pretransform(pre.matrix, pre.perm);
        for (std::size_t i = 0; i < m.data.size(); ++i) CHECK(back.data[i] == masked.data[i]);
        // mask permuted consistently with the data
        for (std::size_t i = 0; i < mask.observed.size(); ++i)
            CHECK(pre.mask.observed[pre.perm.forward[i]] == mask.observed[i]);
    }
    SUBCASE("too sparse to cover every row") {
        Mask mask;
        mask.rows = mask.cols = 8;
        mask.observed.assign(64, 0);
        mask.observed[0] = 1;  // one observation can never cover 8 rows
        CHECK_THROWS(pretransform(m, mask, 0));
    }
}

TEST_CASE("split and merge") {
    ComplexMatrix m(1, 1);
    m.at(0, 0) = {1.0, 2.0};
    RealMatrix re, im;
    split_complex(m, re, im);
    CHECK(re.at(0, 0) == 1.0);
    CHECK(im.at(0, 0) == 2.0);

    const auto r = random_matrix(5, 7, 8);
    split_complex(r, re, im);
    const auto merged = merge_complex(re, im);
    for (std::size_t i = 0; i < r.data.size(); ++i) CHECK(merged.data[i] == r.data[i]);

    ComplexMatrix real_only(3, 3);
    for (auto& v : real_only.data) v = {1.5, 0.0};
    split_complex(real_only, re, im);
    for (double v : im.data) CHECK(v == 0.0);
}

TEST_CASE("mask kind names") {
    CHECK(mask_kind_from_name("pixel") == MaskKind::pixel);
    CHECK(mask_kind_from_name("column") == MaskKind::column);
    CHECK(mask_kind_from_name("compressed") == MaskKind::compressed);
    CHECK(std::string(mask_kind_name(MaskKind::column)) == "column");
    CHECK_THROWS(mask_kind_from_name("bogus"));
}
