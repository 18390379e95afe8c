#include "lobsim/blocks.hpp"

#include <cstdlib>
#include <stdexcept>

#include "lobsim/domain.hpp"

namespace lobsim {

namespace {

std::array<MatQ, 4> atomic_matrices(const Rat& alpha) {
    return {atomic_matrix(TraderType::BL, alpha), atomic_matrix(TraderType::BM, alpha),
            atomic_matrix(TraderType::SL, alpha), atomic_matrix(TraderType::SM, alpha)};
}

// Prefix products P_0 = I, P_k = S_k ... S_1. The subword (i, j] multiplies to
// the identity exactly when P_i == P_j.
std::vector<MatQ> prefix_products(const TypeSequence& seq, const Rat& alpha) {
    const auto mats = atomic_matrices(alpha);
    std::vector<MatQ> pre;
    pre.reserve(seq.size() + 1);
    pre.push_back(MatQ::identity());
    for (TraderType t : seq) pre.push_back(MatQ(mats[static_cast<int>(t)] * pre.back()));
    return pre;
}

// Position of the leftmost shortest periodic subword of length <= max_block_len,
// as (start, length), or length 0 when none exists.
std::pair<std::size_t, std::size_t> find_periodic_subword(const std::vector<MatQ>& pre,
                                                          std::size_t max_block_len) {
    const std::size_t n = pre.size() - 1;
    for (std::size_t len = 2; len <= n && len <= max_block_len; ++len)
        for (std::size_t i = 0; i + len <= n; ++i)
            if (pre[i] == pre[i + len]) return {i, len};
    return {0, 0};
}

}  // namespace

MatQ sequence_matrix(const TypeSequence& seq, const Rat& alpha) {
    const auto mats = atomic_matrices(alpha);
    MatQ m = MatQ::identity();
    for (TraderType t : seq) m = MatQ(mats[static_cast<int>(t)] * m);
    return m;
}

bool is_periodic_block(const TypeSequence& seq, const Rat& alpha) {
    return !seq.empty() && sequence_matrix(seq, alpha) == MatQ::identity();
}

bool is_minimal_periodic_block(const TypeSequence& seq, const Rat& alpha) {
    if (!is_periodic_block(seq, alpha))
        throw std::invalid_argument("sequence is not a periodic block");
    const auto pre = prefix_products(seq, alpha);
    const std::size_t n = seq.size();
    // a proper periodic subword shows up as a repeated prefix product
    for (std::size_t i = 0; i + 1 <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            if (j - i < n && pre[i] == pre[j]) return false;
    return true;
}

TypeSequence reduce_sequence(const TypeSequence& seq, const Rat& alpha,
                             std::size_t max_block_len) {
    if (max_block_len < 2) throw std::invalid_argument("max_block_len must be >= 2");
    TypeSequence cur = seq;
    for (;;) {
        const auto pre = prefix_products(cur, alpha);
        const auto [start, len] = find_periodic_subword(pre, max_block_len);
        if (len == 0) return cur;
        cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(start),
                  cur.begin() + static_cast<std::ptrdiff_t>(start + len));
    }
}

bool is_irreducible(const TypeSequence& seq, const Rat& alpha, std::size_t max_block_len) {
    if (max_block_len < 2) throw std::invalid_argument("max_block_len must be >= 2");
    const auto pre = prefix_products(seq, alpha);
    return find_periodic_subword(pre, max_block_len).second == 0;
}

namespace {

struct Enumerator {
    const std::array<MatQ, 4> mats;
    const std::size_t max_len;
    TypeSequence word;
    std::vector<MatQ> pre{MatQ::identity()};
    int balance = 0;  // limit-type count minus market-type count
    std::vector<TypeSequence> found;

    Enumerator(const Rat& alpha, std::size_t max_len)
        : mats(atomic_matrices(alpha)), max_len(max_len) {}

    void dfs() {
        const std::size_t k = word.size();
        for (TraderType t : kAllTypes) {
            // an identity product needs equal limit and market counts, since
            // their determinants are reciprocal
            const int bal = balance + (is_limit(t) ? 1 : -1);
            if (static_cast<std::size_t>(std::abs(bal)) > max_len - (k + 1)) continue;

            const MatQ next(mats[static_cast<int>(t)] * pre.back());
            std::size_t match = pre.size();
            for (std::size_t j = 0; j < pre.size(); ++j)
                if (pre[j] == next) {
                    match = j;
                    break;
                }
            if (match == 0) {
                // the whole word closed up and no shorter prefix repeated, so
                // this is a minimal block; extensions would contain it
                word.push_back(t);
                found.push_back(word);
                word.pop_back();
                continue;
            }
            if (match < pre.size()) continue;  // contains a periodic subword
            if (k + 1 == max_len) continue;

            word.push_back(t);
            pre.push_back(next);
            balance = bal;
            dfs();
            balance -= is_limit(t) ? 1 : -1;
            pre.pop_back();
            word.pop_back();
        }
    }
};

}  // namespace

std::vector<TypeSequence> enumerate_minimal_blocks(const Rat& alpha, std::size_t max_len) {
    Enumerator e(alpha, max_len);
    if (max_len >= 2) e.dfs();
    return std::move(e.found);
}

BlockReport block_report(const TypeSequence& seq, const Rat& alpha,
                         std::size_t max_block_len) {
    BlockReport rep;
    rep.product = sequence_matrix(seq, alpha);
    rep.is_periodic = rep.product == MatQ::identity();
    rep.is_minimal = rep.is_periodic && is_minimal_periodic_block(seq, alpha);
    rep.reduction = reduce_sequence(seq, alpha, max_block_len);
    return rep;
}

}  // namespace lobsim
