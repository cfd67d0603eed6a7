#include "alphaforge/expr.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "alphaforge/errors.hpp"

namespace alphaforge {

namespace {
constexpr int kUnreachable = 1 << 20;
}

bool ExprNode::operator==(const ExprNode& other) const {
  if (token.id != other.token.id) return false;
  if (children.size() != other.children.size()) return false;
  for (size_t i = 0; i < children.size(); ++i) {
    if (!(children[i] == other.children[i])) return false;
  }
  return true;
}

SyntaxRules::SyntaxRules(const Vocabulary* vocab, int t_max)
    : vocab_(vocab), t_max_(t_max) {
  // Shortest-completion table over (stacked expressions, pending span).
  // Transitions mirror the legal pushes; solved to fixpoint by relaxation.
  const int max_exprs = t_max + 2;
  cost_.assign(static_cast<size_t>(max_exprs + 1) * 2, kUnreachable);
  auto at = [&](int e, int s) -> int& {
    return cost_[static_cast<size_t>(e) * 2 + s];
  };
  at(1, 0) = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    auto relax = [&](int e, int s, int via_e, int via_s) {
      if (via_e < 0 || via_e > max_exprs) return;
      const int candidate = cost_[static_cast<size_t>(via_e) * 2 + via_s];
      if (candidate >= kUnreachable) return;
      int& slot = at(e, s);
      if (candidate + 1 < slot) {
        slot = candidate + 1;
        changed = true;
      }
    };
    for (int e = 0; e <= max_exprs; ++e) {
      // Terminal push: (e,0) -> (e+1,0). Span push: (e,0) -> (e,1).
      relax(e, 0, e + 1, 0);
      relax(e, 0, e, 1);
      for (const Token& tok : vocab_->tokens()) {
        if (tok.kind == TokenKind::kCrossSectionOp && e >= tok.arity) {
          relax(e, 0, e - tok.arity + 1, 0);
        } else if (tok.kind == TokenKind::kTimeSeriesOp && e >= tok.arity - 1) {
          relax(e, 1, e - tok.arity + 2, 0);
        }
      }
    }
  }
}

int SyntaxRules::min_close_cost(int exprs, bool span_on_top) const {
  if (exprs < 0) return kUnreachable;
  const size_t idx = static_cast<size_t>(exprs) * 2 + (span_on_top ? 1 : 0);
  if (idx >= cost_.size()) return kUnreachable;
  return cost_[idx];
}

bool SyntaxState::legal(int token_id) const {
  if (terminated_) return false;
  const Token& tok = rules_->vocab().token(token_id);
  const int budget = rules_->t_max() - length_ - 1;  // body slots after push
  switch (tok.kind) {
    case TokenKind::kSeparator:
      return exprs_ == 1 && !span_on_top_ && length_ >= 1;
    case TokenKind::kFeature:
    case TokenKind::kConstant:
      return !span_on_top_ &&
             rules_->min_close_cost(exprs_ + 1, false) <= budget;
    case TokenKind::kTimeSpan:
      return !span_on_top_ && rules_->min_close_cost(exprs_, true) <= budget;
    case TokenKind::kCrossSectionOp:
      return !span_on_top_ && exprs_ >= tok.arity &&
             rules_->min_close_cost(exprs_ - tok.arity + 1, false) <= budget;
    case TokenKind::kTimeSeriesOp:
      return span_on_top_ && exprs_ >= tok.arity - 1 &&
             rules_->min_close_cost(exprs_ - tok.arity + 2, false) <= budget;
  }
  return false;
}

void SyntaxState::push(int token_id) {
  const Token& tok = rules_->vocab().token(token_id);
  switch (tok.kind) {
    case TokenKind::kSeparator:
      terminated_ = true;
      return;
    case TokenKind::kFeature:
    case TokenKind::kConstant:
      ++exprs_;
      break;
    case TokenKind::kTimeSpan:
      span_on_top_ = true;
      break;
    case TokenKind::kCrossSectionOp:
      exprs_ -= tok.arity - 1;
      break;
    case TokenKind::kTimeSeriesOp:
      span_on_top_ = false;
      exprs_ -= tok.arity - 2;
      break;
  }
  ++length_;
}

int SyntaxState::legal_mask(std::vector<std::uint8_t>* mask) const {
  const int n = rules_->vocab().size();
  mask->assign(static_cast<size_t>(n), 0);
  int count = 0;
  for (int id = 0; id < n; ++id) {
    if (legal(id)) {
      (*mask)[static_cast<size_t>(id)] = 1;
      ++count;
    }
  }
  return count;
}

TokenSequence tokenize(const Vocabulary& vocab, std::string_view text) {
  std::vector<std::string> words;
  {
    std::istringstream iss{std::string(text)};
    std::string w;
    while (iss >> w) words.push_back(w);
  }
  TokenSequence out;
  out.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    const std::string& w = words[i];
    if (w == "BEG") {
      if (i != 0) {
        throw TokenizeError(TokenizeError::Kind::MisplacedIndicator, w, i,
                            "BEG is only allowed in the first position");
      }
      continue;  // implicit; never stored
    }
    const Token* tok = vocab.find(w);
    if (tok == nullptr) {
      throw TokenizeError(TokenizeError::Kind::UnknownToken, w, i,
                          "unknown token '" + w + "' at position " +
                              std::to_string(i));
    }
    if (tok->kind == TokenKind::kSeparator && i + 1 != words.size()) {
      throw TokenizeError(TokenizeError::Kind::MisplacedIndicator, w, i,
                          "SEP is only allowed in the last position");
    }
    out.push_back(tok->id);
  }
  return out;
}

ExprNode parse_rpn(const Vocabulary& vocab, const TokenSequence& seq) {
  if (seq.empty() || vocab.token(seq.back()).kind != TokenKind::kSeparator) {
    throw ParseError(ParseError::Kind::MissingSeparator, seq.size(),
                     "sequence does not end with SEP");
  }
  std::vector<ExprNode> stack;
  for (size_t step = 0; step + 1 < seq.size(); ++step) {
    const Token& tok = vocab.token(seq[step]);
    switch (tok.kind) {
      case TokenKind::kFeature:
      case TokenKind::kConstant:
      case TokenKind::kTimeSpan:
        stack.push_back(ExprNode{tok, {}});
        break;
      case TokenKind::kCrossSectionOp: {
        if (static_cast<int>(stack.size()) < tok.arity) {
          throw ParseError(ParseError::Kind::ArityUnderflow, step,
                           tok.name + " needs " + std::to_string(tok.arity) +
                               " operands at step " + std::to_string(step));
        }
        ExprNode node{tok, {}};
        node.children.assign(stack.end() - tok.arity, stack.end());
        stack.erase(stack.end() - tok.arity, stack.end());
        for (const ExprNode& child : node.children) {
          if (child.token.kind == TokenKind::kTimeSpan) {
            throw ParseError(ParseError::Kind::TimeSpanMisuse, step,
                             tok.name + " cannot take a time span operand");
          }
        }
        stack.push_back(std::move(node));
        break;
      }
      case TokenKind::kTimeSeriesOp: {
        if (static_cast<int>(stack.size()) < tok.arity) {
          throw ParseError(ParseError::Kind::ArityUnderflow, step,
                           tok.name + " needs " + std::to_string(tok.arity) +
                               " operands at step " + std::to_string(step));
        }
        ExprNode node{tok, {}};
        node.children.assign(stack.end() - tok.arity, stack.end());
        stack.erase(stack.end() - tok.arity, stack.end());
        if (node.children.back().token.kind != TokenKind::kTimeSpan) {
          throw ParseError(ParseError::Kind::TimeSpanMisuse, step,
                           tok.name + " requires a trailing time span");
        }
        for (size_t i = 0; i + 1 < node.children.size(); ++i) {
          if (node.children[i].token.kind == TokenKind::kTimeSpan) {
            throw ParseError(ParseError::Kind::TimeSpanMisuse, step,
                             "time span in a sub-expression slot of " +
                                 tok.name);
          }
        }
        stack.push_back(std::move(node));
        break;
      }
      case TokenKind::kSeparator:
        throw ParseError(ParseError::Kind::MissingSeparator, step,
                         "SEP before the end of the sequence");
    }
  }
  if (stack.size() != 1) {
    throw ParseError(ParseError::Kind::DanglingOperands, stack.size(),
                     std::to_string(stack.size()) +
                         " operands remain on the stack at SEP");
  }
  if (stack.front().token.kind == TokenKind::kTimeSpan) {
    throw ParseError(ParseError::Kind::TimeSpanMisuse, seq.size() - 1,
                     "bare time span is not an expression");
  }
  return std::move(stack.front());
}

namespace {

void emit_post_order(const ExprNode& node, TokenSequence* out) {
  for (const ExprNode& child : node.children) emit_post_order(child, out);
  out->push_back(node.token.id);
}

}  // namespace

TokenSequence to_rpn(const Vocabulary& vocab, const ExprNode& tree) {
  TokenSequence out;
  emit_post_order(tree, &out);
  out.push_back(vocab.sep_id());
  return out;
}

std::string to_text(const Vocabulary& vocab, const TokenSequence& seq) {
  std::string out;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i > 0) out += ' ';
    out += Vocabulary::display_name(vocab.token(seq[i]));
  }
  return out;
}

std::string to_infix(const ExprNode& tree) {
  if (tree.children.empty()) return Vocabulary::display_name(tree.token);
  std::string out = tree.token.name;
  out += '(';
  for (size_t i = 0; i < tree.children.size(); ++i) {
    if (i > 0) out += ", ";
    out += to_infix(tree.children[i]);
  }
  out += ')';
  return out;
}

bool legal_next(const SyntaxRules& rules, const TokenSequence& prefix,
                int candidate) {
  SyntaxState state(&rules);
  for (int id : prefix) state.push(id);
  return state.legal(candidate);
}

}  // namespace alphaforge
