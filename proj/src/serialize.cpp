#include "polyhankel/serialize.hpp"

#include <cstdio>
#include <stdexcept>

namespace polyhankel {

namespace {

Coefficient term_coefficient(const nlohmann::json& term) {
  return {term.value("re", 0.0), term.value("im", 0.0)};
}

MultiIndex term_exponents(const nlohmann::json& term) {
  MultiIndex e;
  for (const auto& x : term.at("exponents")) e.push_back(x.get<int>());
  return e;
}

void check_terms_array(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("terms") ||
      !j["terms"].is_array())
    throw std::invalid_argument("polynomial json: expected {\"d\": .., \"terms\": [..]}");
}

void format_value(const nlohmann::ordered_json& j, std::string& out, int indent,
                  int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string closing_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (j.type()) {
    case nlohmann::ordered_json::value_t::null:
      out += "null";
      break;
    case nlohmann::ordered_json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case nlohmann::ordered_json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case nlohmann::ordered_json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case nlohmann::ordered_json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      out += buf;
      break;
    }
    case nlohmann::ordered_json::value_t::string:
      out += nlohmann::json(j.get<std::string>()).dump();
      break;
    case nlohmann::ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad;
        format_value(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += closing_pad + "]";
      break;
    }
    case nlohmann::ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : j.items()) {
        out += pad + nlohmann::json(key).dump() + ": ";
        format_value(value, out, indent, depth + 1);
        if (++i < j.size()) out += ",";
        out += "\n";
      }
      out += closing_pad + "}";
      break;
    }
    default:
      throw std::invalid_argument("dump_json: unsupported value type");
  }
}

}  // namespace

nlohmann::ordered_json to_json(const Polynomial& f) {
  nlohmann::ordered_json j;
  j["d"] = f.dimension();
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& [n, c] : f.terms()) {
    nlohmann::ordered_json term;
    term["n"] = n;
    term["re"] = c.real();
    term["im"] = c.imag();
    j["terms"].push_back(std::move(term));
  }
  return j;
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
  check_terms_array(j);
  Polynomial f(j["d"].get<int>());
  for (const auto& term : j["terms"]) {
    if (term.contains("n")) {
      f.add_term(term["n"].get<MonomialId>(), term_coefficient(term));
    } else if (term.contains("exponents")) {
      const MultiIndex e = term_exponents(term);
      if (static_cast<int>(e.size()) != f.dimension())
        throw std::invalid_argument("polynomial json: exponent vector length mismatch");
      f.add_term(compose(e), term_coefficient(term));
    } else {
      throw std::invalid_argument("polynomial json: term needs \"n\" or \"exponents\"");
    }
  }
  return f;
}

TrigPolynomial trig_polynomial_from_json(const nlohmann::json& j) {
  check_terms_array(j);
  TrigPolynomial f(j["d"].get<int>());
  for (const auto& term : j["terms"]) {
    if (!term.contains("exponents"))
      throw std::invalid_argument(
          "trig polynomial json: terms must use the exponent form");
    const MultiIndex e = term_exponents(term);
    f.add_term(e, term_coefficient(term));
  }
  return f;
}

bool has_negative_exponents(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) return false;
  for (const auto& term : j["terms"]) {
    if (!term.contains("exponents")) continue;
    for (const auto& x : term["exponents"])
      if (x.is_number_integer() && x.get<int>() < 0) return true;
  }
  return false;
}

nlohmann::ordered_json matrix_to_json(const HankelMatrix& m) {
  nlohmann::ordered_json j;
  j["index_set"] = m.index_set();
  j["rows"] = nlohmann::ordered_json::array();
  const bool real = m.is_real();
  for (int r = 0; r < m.size(); ++r) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int c = 0; c < m.size(); ++c) {
      const Coefficient v = m.entry(r, c);
      if (real)
        row.push_back(v.real());
      else
        row.push_back(nlohmann::ordered_json{{"re", v.real()}, {"im", v.imag()}});
    }
    j["rows"].push_back(std::move(row));
  }
  return j;
}

std::string matrix_to_csv(const HankelMatrix& m) {
  const auto fmt = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  std::string out;
  for (int c = 0; c < m.size(); ++c) {
    if (c) out += ",";
    out += std::to_string(m.index_set()[static_cast<std::size_t>(c)]);
  }
  out += "\n";
  const bool real = m.is_real();
  for (int r = 0; r < m.size(); ++r) {
    for (int c = 0; c < m.size(); ++c) {
      if (c) out += ",";
      const Coefficient v = m.entry(r, c);
      if (real) {
        out += fmt(v.real());
      } else {
        out += fmt(v.real()) + (v.imag() < 0.0 ? "-" : "+") + fmt(std::abs(v.imag())) + "i";
      }
    }
    out += "\n";
  }
  return out;
}

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
  std::string out;
  format_value(j, out, indent, 0);
  out += "\n";
  return out;
}

}  // namespace polyhankel
