#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lobsim/blocks.hpp"
#include "lobsim/domain.hpp"
#include "lobsim/rational.hpp"
#include "lobsim/types.hpp"

using namespace lobsim;

namespace {

const TraderType BL = TraderType::BL;
const TraderType BM = TraderType::BM;
const TraderType SL = TraderType::SL;
const TraderType SM = TraderType::SM;

// Brute-force reference: multiply out a word left to right, no prefix caching.
MatQ naive_product(const TypeSequence& seq, const Rat& alpha) {
    MatQ acc = MatQ::identity();
    for (TraderType t : seq) acc = atomic_matrix<Rat>(t, alpha) * acc;
    return acc;
}

// Brute-force reference for minimality: a periodic word is minimal iff no
// proper contiguous subword has identity product.
bool naive_minimal(const TypeSequence& seq, const Rat& alpha) {
    const std::size_t n = seq.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t len = 1; len < n; ++len) {
            if (i + len > n) break;
            TypeSequence sub(seq.begin() + i, seq.begin() + i + len);
            if (naive_product(sub, alpha) == MatQ::identity()) return false;
        }
    }
    return true;
}

// Independent enumeration oracle: walk all 4^len words and keep the minimal
// periodic ones, with no sharing of prefix products or pruning.
std::vector<TypeSequence> naive_enumerate(const Rat& alpha, std::size_t max_len) {
    std::vector<TypeSequence> out;
    for (std::size_t len = 2; len <= max_len; ++len) {
        std::vector<std::size_t> digits(len, 0);
        while (true) {
            TypeSequence word(len);
            for (std::size_t k = 0; k < len; ++k) word[k] = kAllTypes[digits[k]];
            if (naive_product(word, alpha) == MatQ::identity() &&
                naive_minimal(word, alpha)) {
                out.push_back(word);
            }
            std::size_t pos = len;
            while (pos > 0 && digits[pos - 1] == 3) digits[--pos] = 0;
            if (pos == 0) break;
            ++digits[pos - 1];
        }
    }
    return out;
}

Rat half() { return make_rat(1, 2); }
Rat third() { return make_rat(1, 3); }

std::string word_str(const TypeSequence& seq) {
    std::string out;
    for (TraderType t : seq) {
        if (!out.empty()) out += ',';
        out += type_name(t);
    }
    return out;
}

const TypeSequence kTenWord = {BM, BL, BM, BL, SL, SM, SL, SM, SL, SM};
const TypeSequence kFourteenWord = {BL, BM, BL, BM, BL, BM, BL, BM,
                                    SM, SL, SM, SL, SM, SL};

}  // namespace

TEST_CASE("sequence matrix multiplies atomic maps in order") {
    const Rat a = half();
    CHECK(sequence_matrix({}, a) == MatQ::identity());
    CHECK(sequence_matrix({BL, SM}, a) == MatQ::identity());
    CHECK(sequence_matrix({BM, SL}, a) == MatQ::identity());

    // One limit buy then one market buy at alpha = 1/2.
    const MatQ m = sequence_matrix({BL, BM}, a);
    CHECK(m.m00 == make_rat(2, 3));
    CHECK(m.m01 == make_rat(1, 3));
    CHECK(m.m10 == make_rat(-1, 3));
    CHECK(m.m11 == make_rat(4, 3));
    CHECK(m == naive_product({BL, BM}, a));
    CHECK(m.det() == Rat(1));
}

TEST_CASE("sequence matrix agrees with naive product on random words") {
    std::vector<Rat> alphas = {half(), third(), make_rat(1, 4), make_rat(7, 10)};
    std::uint64_t state = 99;
    auto next = [&state]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<std::size_t>((state >> 33) & 3);
    };
    for (const Rat& a : alphas) {
        for (int rep = 0; rep < 25; ++rep) {
            TypeSequence w;
            for (int k = 0; k < 12; ++k) w.push_back(kAllTypes[next()]);
            CHECK(sequence_matrix(w, a) == naive_product(w, a));
        }
    }
}

TEST_CASE("periodicity detection") {
    CHECK(is_periodic_block({BM, SL}, half()));
    CHECK(is_periodic_block({SL, BM}, half()));
    CHECK(is_periodic_block({BL, SM}, third()));
    CHECK(is_periodic_block(kTenWord, half()));
    CHECK(is_periodic_block(kFourteenWord, third()));

    CHECK_FALSE(is_periodic_block({}, half()));
    CHECK_FALSE(is_periodic_block({BL}, half()));
    CHECK_FALSE(is_periodic_block({BL, BL}, half()));
    CHECK_FALSE(is_periodic_block({BL, BM}, half()));
    CHECK_FALSE(is_periodic_block(kTenWord, third()));
}

TEST_CASE("minimality detection") {
    CHECK(is_minimal_periodic_block({BL, SM}, half()));
    CHECK(is_minimal_periodic_block(kTenWord, half()));
    CHECK(is_minimal_periodic_block(kFourteenWord, third()));
    CHECK(naive_minimal(kTenWord, half()));
    CHECK(naive_minimal(kFourteenWord, third()));

    // Concatenation of two inverse pairs is periodic but splits.
    CHECK(is_periodic_block({BL, SM, BM, SL}, half()));
    CHECK_FALSE(is_minimal_periodic_block({BL, SM, BM, SL}, half()));
    CHECK_FALSE(is_minimal_periodic_block({BL, SM, BL, SM}, half()));

    CHECK_THROWS_AS(is_minimal_periodic_block({BL, BM}, half()),
                    std::invalid_argument);
}

TEST_CASE("reduction deletes periodic subwords") {
    const Rat a = half();
    CHECK(reduce_sequence({BL, SM, BM, SL}, a, 16).empty());
    CHECK(reduce_sequence({BL, BL, SM}, a, 16) == TypeSequence{BL});
    CHECK(reduce_sequence({BL, BM}, a, 16) == TypeSequence{BL, BM});
    CHECK(reduce_sequence({}, a, 16).empty());

    // Nested cancellation: erasing the inner pair exposes the outer one.
    CHECK(reduce_sequence({BL, BM, SL, SM}, a, 16).empty());
    CHECK(reduce_sequence({BL, BM, SL, SM, BL}, a, 16) == TypeSequence{BL});

    // A window shorter than every periodic subword leaves the word alone.
    TypeSequence padded = kTenWord;
    CHECK(reduce_sequence(padded, a, 4) == padded);
    CHECK(reduce_sequence(padded, a, 10).empty());

    CHECK_THROWS_AS(reduce_sequence({BL}, a, 1), std::invalid_argument);
}

TEST_CASE("reduction preserves the word product") {
    std::vector<Rat> alphas = {half(), third()};
    std::uint64_t state = 7;
    auto next = [&state]() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<std::size_t>((state >> 33) & 3);
    };
    for (const Rat& a : alphas) {
        for (int rep = 0; rep < 20; ++rep) {
            TypeSequence w;
            for (int k = 0; k < 14; ++k) w.push_back(kAllTypes[next()]);
            const TypeSequence r = reduce_sequence(w, a, 16);
            CHECK(sequence_matrix(r, a) == sequence_matrix(w, a));
            CHECK(is_irreducible(r, a, 16));
            CHECK(r.size() <= w.size());
        }
    }
}

TEST_CASE("irreducibility") {
    const Rat a = half();
    CHECK(is_irreducible({}, a, 16));
    CHECK(is_irreducible({BL}, a, 16));
    CHECK(is_irreducible({BL, BL, BL}, a, 16));
    CHECK(is_irreducible({BL, BM}, a, 16));
    CHECK_FALSE(is_irreducible({BM, SL}, a, 16));
    CHECK_FALSE(is_irreducible({BL, BM, SL, SM}, a, 16));
    CHECK_FALSE(is_irreducible(kTenWord, a, 10));
    CHECK(is_irreducible(kTenWord, a, 9));
}

TEST_CASE("enumeration finds exactly the inverse pairs at small length") {
    for (const Rat& a : {half(), third()}) {
        const auto words = enumerate_minimal_blocks(a, 3);
        REQUIRE(words.size() == 4);
        const std::set<TypeSequence> got(words.begin(), words.end());
        const std::set<TypeSequence> want = {
            {BL, SM}, {SM, BL}, {BM, SL}, {SL, BM}};
        CHECK(got == want);
    }
    CHECK(enumerate_minimal_blocks(half(), 1).empty());
}

TEST_CASE("enumeration matches the brute-force oracle") {
    for (const Rat& a : {half(), third()}) {
        const auto fast = enumerate_minimal_blocks(a, 5);
        const auto slow = naive_enumerate(a, 5);
        const std::set<TypeSequence> f(fast.begin(), fast.end());
        const std::set<TypeSequence> s(slow.begin(), slow.end());
        CHECK(f.size() == fast.size());
        CHECK(f == s);
    }
}

TEST_CASE("enumerated blocks verify and have even length") {
    for (const Rat& a : {half(), third(), make_rat(1, 4)}) {
        const auto words = enumerate_minimal_blocks(a, 8);
        CHECK(words.size() >= 4);
        for (const auto& w : words) {
            const std::string label = word_str(w);
            CAPTURE(label);
            CHECK(w.size() % 2 == 0);
            CHECK(is_periodic_block(w, a));
            CHECK(is_minimal_periodic_block(w, a));
            CHECK(naive_minimal(w, a));
        }
    }
}

TEST_CASE("concatenated periodic blocks stay periodic but not minimal") {
    const Rat a = half();
    TypeSequence w = kTenWord;
    w.insert(w.end(), kTenWord.begin(), kTenWord.end());
    CHECK(is_periodic_block(w, a));
    CHECK_FALSE(is_minimal_periodic_block(w, a));
    CHECK(reduce_sequence(w, a, 16).empty());
}

TEST_CASE("block report bundles the individual queries") {
    const Rat a = half();
    const BlockReport r = block_report(kTenWord, a, 16);
    CHECK(r.is_periodic);
    CHECK(r.is_minimal);
    CHECK(r.product == MatQ::identity());
    CHECK(r.reduction.empty());

    const BlockReport q = block_report({BL, BL, SM}, a, 16);
    CHECK_FALSE(q.is_periodic);
    CHECK_FALSE(q.is_minimal);
    CHECK(q.reduction == TypeSequence{BL});
    CHECK(q.product == sequence_matrix({BL}, a));
}
