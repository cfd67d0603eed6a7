#include "alphaforge/vocab.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace alphaforge {

const char* const kFeatureNames[kNumFeatures] = {"open",   "close", "high",
                                                 "low",    "volume", "vwap"};

namespace {

Token cs_op(int id, const char* name, OpCode op, int arity) {
  Token t;
  t.id = id;
  t.kind = TokenKind::kCrossSectionOp;
  t.arity = arity;
  t.name = name;
  t.op = op;
  return t;
}

Token ts_op(int id, const char* name, OpCode op, int arity) {
  Token t;
  t.id = id;
  t.kind = TokenKind::kTimeSeriesOp;
  t.arity = arity;
  t.name = name;
  t.op = op;
  return t;
}

Token feature(int id, const char* name, int index) {
  Token t;
  t.id = id;
  t.kind = TokenKind::kFeature;
  t.name = name;
  t.feature = index;
  return t;
}

Token time_span(int id, const char* name, int days) {
  Token t;
  t.id = id;
  t.kind = TokenKind::kTimeSpan;
  t.name = name;
  t.span = days;
  return t;
}

Token constant(int id, const char* name, double value) {
  Token t;
  t.id = id;
  t.kind = TokenKind::kConstant;
  t.name = name;
  t.value = value;
  return t;
}

Token separator(int id) {
  Token t;
  t.id = id;
  t.kind = TokenKind::kSeparator;
  t.name = "SEP";
  return t;
}

bool parse_double(std::string_view word, double* out) {
  std::string s(word);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == nullptr || *end != '\0' || end == s.c_str()) return false;
  *out = v;
  return true;
}

}  // namespace

Vocabulary Vocabulary::standard() {
  std::vector<Token> toks;
  toks.reserve(53);
  toks.push_back(cs_op(0, "Abs", OpCode::kAbs, 1));
  toks.push_back(cs_op(1, "Log", OpCode::kLog, 1));
  toks.push_back(cs_op(2, "Add", OpCode::kAdd, 2));
  toks.push_back(cs_op(3, "Sub", OpCode::kSub, 2));
  toks.push_back(cs_op(4, "Mul", OpCode::kMul, 2));
  toks.push_back(cs_op(5, "Div", OpCode::kDiv, 2));
  toks.push_back(cs_op(6, "Larger", OpCode::kLarger, 2));
  toks.push_back(cs_op(7, "Smaller", OpCode::kSmaller, 2));
  toks.push_back(ts_op(8, "Ref", OpCode::kRef, 2));
  toks.push_back(ts_op(9, "Mean", OpCode::kMean, 2));
  toks.push_back(ts_op(10, "Sum", OpCode::kSum, 2));
  toks.push_back(ts_op(11, "Std", OpCode::kStd, 2));
  toks.push_back(ts_op(12, "Var", OpCode::kVar, 2));
  toks.push_back(ts_op(13, "Max", OpCode::kMax, 2));
  toks.push_back(ts_op(14, "Min", OpCode::kMin, 2));
  toks.push_back(ts_op(15, "Med", OpCode::kMed, 2));
  toks.push_back(ts_op(16, "Mad", OpCode::kMad, 2));
  toks.push_back(ts_op(17, "Delta", OpCode::kDelta, 2));
  toks.push_back(ts_op(18, "WMA", OpCode::kWma, 2));
  toks.push_back(ts_op(19, "EMA", OpCode::kEma, 2));
  toks.push_back(ts_op(20, "Cov", OpCode::kCov, 3));
  toks.push_back(ts_op(21, "Corr", OpCode::kCorr, 3));
  toks.push_back(feature(22, "$open", 0));
  toks.push_back(feature(23, "$close", 1));
  toks.push_back(feature(24, "$high", 2));
  toks.push_back(feature(25, "$low", 3));
  toks.push_back(feature(26, "$volume", 4));
  toks.push_back(feature(27, "$vwap", 5));
  toks.push_back(time_span(28, "10", 10));
  toks.push_back(time_span(29, "20", 20));
  toks.push_back(time_span(30, "30", 30));
  toks.push_back(time_span(31, "40", 40));
  toks.push_back(time_span(32, "50", 50));
  toks.push_back(constant(33, "-30.0", -30.0));
  toks.push_back(constant(34, "-10.0", -10.0));
  toks.push_back(constant(35, "-5.0", -5.0));
  toks.push_back(constant(36, "-2.0", -2.0));
  toks.push_back(constant(37, "-1.0", -1.0));
  toks.push_back(constant(38, "-0.5", -0.5));
  toks.push_back(constant(39, "-0.01", -0.01));
  toks.push_back(constant(40, "0.01", 0.01));
  toks.push_back(constant(41, "0.5", 0.5));
  toks.push_back(constant(42, "1.0", 1.0));
  toks.push_back(constant(43, "2.0", 2.0));
  toks.push_back(constant(44, "5.0", 5.0));
  toks.push_back(constant(45, "10.0", 10.0));
  toks.push_back(constant(46, "30.0", 30.0));
  toks.push_back(separator(47));
  // Extensions needed by the Alpha101 demonstration set.
  toks.push_back(cs_op(48, "Sign", OpCode::kSign, 1));
  toks.push_back(cs_op(49, "Pow", OpCode::kPow, 2));
  toks.push_back(time_span(50, "1", 1));
  toks.push_back(time_span(51, "5", 5));
  toks.push_back(constant(52, "0.001", 0.001));
  return from_tokens(std::move(toks));
}

Vocabulary Vocabulary::from_tokens(std::vector<Token> tokens) {
  Vocabulary vocab;
  vocab.tokens_ = std::move(tokens);
  for (size_t i = 0; i < vocab.tokens_.size(); ++i) {
    Token& tok = vocab.tokens_[i];
    if (tok.id != static_cast<int>(i)) {
      throw std::invalid_argument("vocabulary ids must be dense and ordered");
    }
    if (!vocab.by_name_.emplace(tok.name, tok.id).second) {
      throw std::invalid_argument("duplicate token name: " + tok.name);
    }
    if (tok.kind == TokenKind::kSeparator) vocab.sep_id_ = tok.id;
  }
  if (vocab.sep_id_ < 0) {
    throw std::invalid_argument("vocabulary must contain SEP");
  }
  return vocab;
}

const Token* Vocabulary::find(std::string_view word) const {
  auto it = by_name_.find(std::string(word));
  if (it != by_name_.end()) return &tokens_[static_cast<size_t>(it->second)];

  // '$'-less feature spelling, as used by the Alpha101 RPN fixtures.
  it = by_name_.find("$" + std::string(word));
  if (it != by_name_.end()) return &tokens_[static_cast<size_t>(it->second)];

  // 'd'-suffixed span spelling ("10d").
  if (word.size() > 1 && word.back() == 'd') {
    bool digits = true;
    for (char c : word.substr(0, word.size() - 1)) {
      if (std::isdigit(static_cast<unsigned char>(c)) == 0) digits = false;
    }
    if (digits) {
      it = by_name_.find(std::string(word.substr(0, word.size() - 1)));
      if (it != by_name_.end()) {
        const Token& tok = tokens_[static_cast<size_t>(it->second)];
        if (tok.kind == TokenKind::kTimeSpan) return &tok;
      }
    }
  }

  // Numeric alias: "-1" means the constant -1.0.
  double v = 0.0;
  if (parse_double(word, &v)) {
    for (const Token& tok : tokens_) {
      if (tok.kind == TokenKind::kConstant && tok.value == v) return &tok;
      if (tok.kind == TokenKind::kTimeSpan &&
          static_cast<double>(tok.span) == v) {
        return &tok;
      }
    }
  }
  return nullptr;
}

std::string Vocabulary::display_name(const Token& tok) {
  if (tok.kind == TokenKind::kFeature && !tok.name.empty() &&
      tok.name.front() == '$') {
    return tok.name.substr(1);
  }
  return tok.name;
}

}  // namespace alphaforge
