#pragma once

#include <cstddef>
#include <vector>

#include "lobsim/rational.hpp"
#include "lobsim/types.hpp"

namespace lobsim {

// Time-ordered word of trader types: the first element acts first.
using TypeSequence = std::vector<TraderType>;

using MatQ = Mat2<Rat>;

// Product of the atomic maps in time order: the first symbol is the rightmost
// factor, so the result acts on a column quote exactly as the word does.
MatQ sequence_matrix(const TypeSequence& seq, const Rat& alpha);

// A word is periodic when it moves no quote at all.
bool is_periodic_block(const TypeSequence& seq, const Rat& alpha);

// A periodic word is minimal when no proper contiguous subword is periodic.
// Throws std::invalid_argument when seq itself is not periodic.
bool is_minimal_periodic_block(const TypeSequence& seq, const Rat& alpha);

// Repeatedly deletes the leftmost shortest contiguous periodic subword of
// length at most max_block_len until none remains.
TypeSequence reduce_sequence(const TypeSequence& seq, const Rat& alpha,
                             std::size_t max_block_len);

bool is_irreducible(const TypeSequence& seq, const Rat& alpha, std::size_t max_block_len);

// All minimal periodic words of length <= max_len, in depth-first
// lexicographic order (BL < BM < SL < SM).
std::vector<TypeSequence> enumerate_minimal_blocks(const Rat& alpha, std::size_t max_len);

struct BlockReport {
    bool is_periodic = false;
    bool is_minimal = false;
    MatQ product = MatQ::identity();
    TypeSequence reduction;
};

BlockReport block_report(const TypeSequence& seq, const Rat& alpha,
                         std::size_t max_block_len);

}  // namespace lobsim
