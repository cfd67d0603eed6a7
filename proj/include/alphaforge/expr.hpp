#ifndef ALPHAFORGE_EXPR_HPP_
#define ALPHAFORGE_EXPR_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "alphaforge/vocab.hpp"

namespace alphaforge {

// A factor formula as an ordered list of vocabulary ids in reverse Polish
// order. BEG is implicit at position 0 and never stored; a complete sequence
// ends with SEP.
using TokenSequence = std::vector<int>;

// Expression tree. For time-series operators the final child is the time-span
// terminal, so post-order emission reproduces the RPN sequence directly.
struct ExprNode {
  Token token;
  std::vector<ExprNode> children;

  bool operator==(const ExprNode& other) const;
  bool operator!=(const ExprNode& other) const { return !(*this == other); }
};

// Precomputed legality tables for one (vocabulary, T_max) pair. T_max bounds
// the number of body tokens, excluding the implicit BEG and the trailing SEP.
class SyntaxRules {
 public:
  SyntaxRules(const Vocabulary* vocab, int t_max);

  const Vocabulary& vocab() const { return *vocab_; }
  int t_max() const { return t_max_; }

  // Minimal body tokens needed to reduce `exprs` stacked operands (with or
  // without a pending span on top) to a single expression. Unreachable states
  // report a value larger than any budget.
  int min_close_cost(int exprs, bool span_on_top) const;

 private:
  const Vocabulary* vocab_;
  int t_max_;
  std::vector<int> cost_;  // [exprs * 2 + span]
};

// Incremental stack tracker used for action masking. Cheap to copy.
class SyntaxState {
 public:
  explicit SyntaxState(const SyntaxRules* rules)
      : rules_(rules) {}

  bool legal(int token_id) const;
  void push(int token_id);  // pre: legal(token_id)

  // mask[i] = legal(i) for every vocabulary id. Returns the number of legal
  // actions.
  int legal_mask(std::vector<std::uint8_t>* mask) const;

  bool complete() const { return exprs_ == 1 && !span_on_top_; }
  bool terminated() const { return terminated_; }
  int length() const { return length_; }
  int stack_exprs() const { return exprs_; }
  bool span_on_top() const { return span_on_top_; }

 private:
  const SyntaxRules* rules_;
  int exprs_ = 0;
  bool span_on_top_ = false;
  int length_ = 0;
  bool terminated_ = false;
};

// --- expr_core operations ---

// Whitespace-separated token names -> ids. Accepts an optional leading BEG
// and the aliases documented on Vocabulary::find. Throws TokenizeError.
TokenSequence tokenize(const Vocabulary& vocab, std::string_view text);

// Stack parse of a SEP-terminated sequence. Throws ParseError.
ExprNode parse_rpn(const Vocabulary& vocab, const TokenSequence& seq);

// Post-order emission plus trailing SEP; inverse of parse_rpn.
TokenSequence to_rpn(const Vocabulary& vocab, const ExprNode& tree);

// Bare-form text: "close open Sub SEP". Inverse of tokenize modulo aliases.
std::string to_text(const Vocabulary& vocab, const TokenSequence& seq);

// Report form: "Div(Sub(close, open), Add(Sub(high, low), 0.001))".
std::string to_infix(const ExprNode& tree);

// True iff appending `candidate` to `prefix` keeps a completion reachable
// within T_max. Total predicate over any reachable prefix.
bool legal_next(const SyntaxRules& rules, const TokenSequence& prefix,
                int candidate);

}  // namespace alphaforge

#endif  // ALPHAFORGE_EXPR_HPP_
