#include "torusact/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace torusact {

namespace {

constexpr int kCensusFormatVersion = 1;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  return out;
}

Int parse_int(std::string_view token) {
  Int value = 0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || begin == end) parse_error("bad integer '" + std::string(token) + "'");
  return value;
}

Int json_int(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) parse_error(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) parse_error(std::string("field '") + key + "' is not an integer");
  return v.get<Int>();
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "table") return OutputFormat::Table;
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  parse_error("unknown format '" + std::string(name) + "'");
}

IntVector parse_tuple(std::string_view text) {
  const std::string s = strip_spaces(text);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') parse_error("expected '(...)', got '" + s + "'");
  IntVector out;
  std::string_view body(s.data() + 1, s.size() - 2);
  if (body.empty()) parse_error("empty tuple");
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = body.find(',', pos);
    out.push_back(parse_int(body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<IntVector> parse_tuple_list(std::string_view text) {
  const std::string s = strip_spaces(text);
  std::vector<IntVector> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != '(') parse_error("expected '(' at offset " + std::to_string(pos) + " in '" + s + "'");
    const std::size_t close = s.find(')', pos);
    if (close == std::string::npos) parse_error("unterminated tuple in '" + s + "'");
    out.push_back(parse_tuple(std::string_view(s).substr(pos, close - pos + 1)));
    pos = close + 1;
    if (pos < s.size()) {
      if (s[pos] != ',') parse_error("expected ',' between tuples in '" + s + "'");
      ++pos;
      if (pos == s.size()) parse_error("trailing ',' in '" + s + "'");
    }
  }
  if (out.empty()) parse_error("no tuples given");
  return out;
}

WeightedOrbitSpace orbit_space_from_json(const nlohmann::json& j) {
  if (!j.is_object()) parse_error("orbit space must be a JSON object");
  const Int rank = json_int(j, "rank");
  if (rank < 0) parse_error("negative rank");
  if (!j.contains("weights") || !j.at("weights").is_array()) parse_error("missing array 'weights'");
  std::vector<IntVector> weights;
  for (const auto& w : j.at("weights")) {
    if (!w.is_array()) parse_error("each weight must be an array");
    IntVector v;
    for (const auto& x : w) {
      if (!x.is_number_integer()) parse_error("weight entries must be integers");
      v.push_back(x.get<Int>());
    }
    weights.push_back(std::move(v));
  }
  return WeightedOrbitSpace(static_cast<std::size_t>(rank), std::move(weights));
}

nlohmann::json to_json(const WeightedOrbitSpace& s) {
  return nlohmann::json{{"rank", s.rank()}, {"weights", s.weights()}};
}

ActionParams action_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) parse_error("action needs a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle") return CircleActionParams{json_int(j, "a"), json_int(j, "b"), json_int(j, "c"), json_int(j, "d")};
  if (kind == "t2")
    return T2ActionParams{json_int(j, "a"), json_int(j, "b"), json_int(j, "c"), json_int(j, "d"),
                          json_int(j, "n"), json_int(j, "k"), json_int(j, "m"), json_int(j, "l")};
  parse_error("unknown action kind '" + kind + "'");
}

nlohmann::json to_json(const CircleActionParams& p) {
  return nlohmann::json{{"kind", "circle"}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}};
}

nlohmann::json to_json(const T2ActionParams& p) {
  return nlohmann::json{{"kind", "t2"}, {"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d},
                        {"n", p.n},     {"k", p.k}, {"m", p.m}, {"l", p.l}};
}

nlohmann::json to_json(const Dim5Params& p) {
  return nlohmann::json{{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d},
                        {"k", p.k}, {"l", p.l}, {"m", p.m}, {"n", p.n}};
}

nlohmann::json to_json(const AbelianGroup& g) {
  return nlohmann::json{{"free_rank", g.free_rank}, {"torsion", g.torsion}, {"name", g.to_string()}};
}

CircleActionParams circle_from_tuple(const IntVector& v) {
  if (v.size() != 4) parse_error("circle action needs 4 integers (a,b,c,d)");
  return CircleActionParams{v[0], v[1], v[2], v[3]};
}

T2ActionParams t2_from_tuple(const IntVector& v) {
  if (v.size() != 8) parse_error("T2 action needs 8 integers (a,b,c,d,n,k,m,l)");
  return T2ActionParams{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) parse_error("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    parse_error(path + ": " + e.what());
  }
}

std::string row_params(const CensusRow& row) {
  std::ostringstream os;
  if (row.t2) {
    const auto& p = *row.t2;
    os << "t2(a,b,c,d,n,k,m,l)=(" << p.a << ',' << p.b << ',' << p.c << ',' << p.d << ',' << p.n << ',' << p.k << ','
       << p.m << ',' << p.l << ')';
  } else if (row.circle) {
    const auto& p = *row.circle;
    os << "circle(a,b,c,d,k,l,m,n)=(" << p.a << ',' << p.b << ',' << p.c << ',' << p.d << ',' << p.k << ',' << p.l
       << ',' << p.m << ',' << p.n << ')';
  } else {
    os << "-";
  }
  return os.str();
}

void write_census(const Census& census, OutputFormat format, std::ostream& os) {
  switch (format) {
    case OutputFormat::Json: {
      nlohmann::ordered_json header{{"format", "torusact-census"}, {"version", kCensusFormatVersion},
                            {"rank", census.rank},        {"bound", census.bound},
                            {"rows", census.rows.size()}};
      os << header.dump() << '\n';
      for (const auto& row : census.rows) {
        nlohmann::ordered_json j{{"weights", row.canonical.weights()},
                         {"type", row.type.to_string()},
                         {"pi1", row.pi1.to_string()},
                         {"verified", row.verified}};
        if (row.t2) j["params"] = to_json(*row.t2);
        if (row.circle) j["params"] = to_json(*row.circle);
        os << j.dump() << '\n';
      }
      return;
    }
    case OutputFormat::Csv: {
      os << "# torusact-census version=" << kCensusFormatVersion << " rank=" << census.rank
         << " bound=" << census.bound << " rows=" << census.rows.size() << '\n';
      os << "weights,type,pi1,params,verified\n";
      for (const auto& row : census.rows)
        os << '"' << row.canonical.to_string() << "\"," << row.type.to_string() << ',' << row.pi1.to_string() << ",\""
           << row_params(row) << "\"," << (row.verified ? "true" : "false") << '\n';
      return;
    }
    case OutputFormat::Table: {
      std::vector<std::array<std::string, 5>> cells;
      cells.push_back({"weights", "type", "pi1", "params", "verified"});
      for (const auto& row : census.rows)
        cells.push_back({row.canonical.to_string(), row.type.to_string(), row.pi1.to_string(), row_params(row),
                         row.verified ? "yes" : "NO"});
      std::array<std::size_t, 5> width{};
      for (const auto& r : cells)
        for (std::size_t i = 0; i < 5; ++i) width[i] = std::max(width[i], r[i].size());
      os << "census rank " << census.rank << ", entries in [-" << census.bound << ", " << census.bound << "], "
         << census.rows.size() << " classes\n";
      for (const auto& r : cells) {
        for (std::size_t i = 0; i < 5; ++i) {
          if (i + 1 < 5) os << std::left << std::setw(static_cast<int>(width[i])) << r[i];
          else os << r[i];
          if (i + 1 < 5) os << "  ";
        }
        os << '\n';
      }
      return;
    }
  }
}

}  // namespace torusact
