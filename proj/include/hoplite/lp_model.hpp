#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hoplite/error.hpp"

namespace hoplite::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Maximize, Minimize };

using VarId = std::size_t;
using RowId = std::size_t;

struct Term {
  VarId var;
  double coef;
};

// Sparse linear expression with merged duplicate terms.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(VarId v, double c = 1.0) { add(v, c); }

  LinearExpr& add(VarId v, double c) {
    if (c != 0.0) coefs_[v] += c;
    return *this;
  }
  LinearExpr& add(const LinearExpr& other, double scale = 1.0) {
    for (const auto& [v, c] : other.coefs_) add(v, c * scale);
    return *this;
  }
  LinearExpr& operator+=(const LinearExpr& other) { return add(other); }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    out.reserve(coefs_.size());
    for (const auto& [v, c] : coefs_)
      if (c != 0.0) out.push_back({v, c});
    return out;
  }

  double evaluate(const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& [v, c] : coefs_) s += c * x.at(v);
    return s;
  }

  bool empty() const { return coefs_.empty(); }

 private:
  std::map<VarId, double> coefs_;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
};

struct Objective {
  Sense sense = Sense::Maximize;
  std::vector<Term> terms;
  double constant = 0.0;
};

class Model {
 public:
  VarId addVariable(std::string name, double lower = 0.0, double upper = kInfinity) {
    if (!(lower >= 0.0)) throw ModelError("variable '" + name + "': lower bound must be >= 0");
    if (!(lower <= upper)) throw ModelError("variable '" + name + "': lower bound exceeds upper bound");
    variables_.push_back({std::move(name), lower, upper});
    return variables_.size() - 1;
  }

  void setUpper(VarId v, double upper) {
    if (!(variables_.at(v).lower <= upper))
      throw ModelError("variable '" + variables_[v].name + "': lower bound exceeds upper bound");
    variables_[v].upper = upper;
  }

  RowId addConstraint(std::string name, const LinearExpr& expr, Relation rel, double rhs) {
    if (!std::isfinite(rhs)) throw ModelError("constraint '" + name + "': rhs must be finite");
    auto terms = expr.terms();
    for (const auto& t : terms)
      if (t.var >= variables_.size())
        throw ModelError("constraint '" + name + "' references an undeclared variable");
    constraints_.push_back({std::move(name), std::move(terms), rel, rhs});
    return constraints_.size() - 1;
  }

  void setObjective(Sense sense, const LinearExpr& expr, double constant = 0.0) {
    objective_ = {sense, expr.terms(), constant};
    for (const auto& t : objective_.terms)
      if (t.var >= variables_.size()) throw ModelError("objective references an undeclared variable");
  }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Objective& objective() const { return objective_; }
  std::size_t variableCount() const { return variables_.size(); }
  std::size_t constraintCount() const { return constraints_.size(); }

  double activity(RowId row, const std::vector<double>& x) const {
    double s = 0.0;
    for (const auto& t : constraints_.at(row).terms) s += t.coef * x.at(t.var);
    return s;
  }

  double objectiveValue(const std::vector<double>& x) const {
    double s = objective_.constant;
    for (const auto& t : objective_.terms) s += t.coef * x.at(t.var);
    return s;
  }

  // Human-readable listing: objective, one line per row, then bounds.
  void dump(std::ostream& out) const {
    auto termText = [&](const std::vector<Term>& terms) {
      std::ostringstream s;
      s << std::setprecision(10);
      bool first = true;
      for (const auto& t : terms) {
        if (!first) s << (t.coef < 0 ? " - " : " + ");
        else if (t.coef < 0) s << "-";
        const double a = std::abs(t.coef);
        if (a != 1.0) s << a << " ";
        s << variables_[t.var].name;
        first = false;
      }
      if (first) s << "0";
      return s.str();
    };
    out << (objective_.sense == Sense::Maximize ? "maximize" : "minimize") << "\n  "
        << termText(objective_.terms);
    if (objective_.constant != 0.0) out << " + " << objective_.constant;
    out << "\nsubject to\n";
    for (const auto& c : constraints_) {
      const char* rel = c.relation == Relation::LessEqual ? "<=" : c.relation == Relation::Equal ? "=" : ">=";
      out << "  " << c.name << ": " << termText(c.terms) << " " << rel << " " << std::setprecision(10) << c.rhs
          << "\n";
    }
    out << "bounds\n";
    for (const auto& v : variables_) {
      out << "  " << v.lower << " <= " << v.name << " <= ";
      if (std::isinf(v.upper)) out << "inf";
      else out << std::setprecision(10) << v.upper;
      out << "\n";
    }
  }

  std::string dump() const {
    std::ostringstream s;
    dump(s);
    return s.str();
  }

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  Objective objective_;
};

}  // namespace hoplite::lp
