#ifndef ALPHAFORGE_VOCAB_HPP_
#define ALPHAFORGE_VOCAB_HPP_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace alphaforge {

enum class TokenKind {
  kCrossSectionOp,
  kTimeSeriesOp,
  kFeature,
  kTimeSpan,
  kConstant,
  kSeparator,
};

// Dispatch code for the evaluator. kNone for non-operator tokens.
enum class OpCode {
  kNone,
  // cross-sectional
  kAbs, kLog, kSign,
  kAdd, kSub, kMul, kDiv, kLarger, kSmaller, kPow,
  // time-series; the final operand is always a time span
  kRef, kMean, kSum, kStd, kVar, kMax, kMin, kMed, kMad, kDelta,
  kWma, kEma, kCov, kCorr,
};

struct Token {
  int id = -1;
  TokenKind kind = TokenKind::kConstant;
  int arity = 0;            // operand count incl. the span slot for TS ops
  std::string name;         // canonical spelling ("Corr", "$close", "10", "-0.5")
  OpCode op = OpCode::kNone;
  int feature = -1;         // index into Panel feature order
  double value = 0.0;       // constants
  int span = 0;             // time spans

  bool is_operator() const {
    return kind == TokenKind::kCrossSectionOp ||
           kind == TokenKind::kTimeSeriesOp;
  }
  bool is_terminal() const {
    return kind == TokenKind::kFeature || kind == TokenKind::kConstant;
  }
};

// Panel feature order; Token::feature indexes into this.
inline constexpr int kNumFeatures = 6;
extern const char* const kFeatureNames[kNumFeatures];  // open close high low volume vwap

// The fixed token table. One vocabulary instance is built per run and shared
// read-only; tests may build shrunk variants.
class Vocabulary {
 public:
  static Vocabulary standard();
  static Vocabulary from_tokens(std::vector<Token> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  const Token& token(int id) const { return tokens_[static_cast<size_t>(id)]; }
  const std::vector<Token>& tokens() const { return tokens_; }

  // Exact canonical name, '$'-less feature alias, 'd'-suffixed span alias,
  // or numeric-value alias for constants/spans. nullptr when absent.
  const Token* find(std::string_view word) const;

  int sep_id() const { return sep_id_; }

  // Bare display form: features without '$', spans without 'd'.
  static std::string display_name(const Token& tok);

 private:
  std::vector<Token> tokens_;
  std::unordered_map<std::string, int> by_name_;
  int sep_id_ = -1;
};

}  // namespace alphaforge

#endif  // ALPHAFORGE_VOCAB_HPP_
