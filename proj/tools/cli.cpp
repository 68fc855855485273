#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "torusact/biquotient.hpp"
#include "torusact/census.hpp"
#include "torusact/classify.hpp"
#include "torusact/io.hpp"
#include "torusact/orbit_space.hpp"

namespace torusact::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Options {
  std::vector<std::string> inputs;
  std::optional<Int> rank;
  std::string weights;
  std::string circle;
  std::string t2;
  std::string slope;
  std::optional<Int> bound;
  bool oriented = false;
  std::string format = "table";
  std::string out;
};

class Report {
 public:
  void add(std::string key, ordered_json value) { fields_.emplace_back(std::move(key), std::move(value)); }

  void render(OutputFormat format, std::ostream& os) const {
    switch (format) {
      case OutputFormat::Json: {
        ordered_json j = ordered_json::object();
        for (const auto& [k, v] : fields_) j[k] = v;
        os << j.dump() << '\n';
        return;
      }
      case OutputFormat::Csv: {
        for (std::size_t i = 0; i < fields_.size(); ++i) os << (i ? "," : "") << fields_[i].first;
        os << '\n';
        for (std::size_t i = 0; i < fields_.size(); ++i) os << (i ? "," : "") << csv_cell(fields_[i].second);
        os << '\n';
        return;
      }
      case OutputFormat::Table: {
        std::size_t width = 0;
        for (const auto& f : fields_) width = std::max(width, f.first.size());
        for (const auto& [k, v] : fields_)
          os << std::left << std::setw(static_cast<int>(width)) << k << "  " << plain(v) << '\n';
        return;
      }
    }
  }

 private:
  static std::string plain(const ordered_json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

  static std::string csv_cell(const ordered_json& v) {
    const std::string s = plain(v);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
      if (ch == '"') quoted += '"';
      quoted += ch;
    }
    return quoted + '"';
  }

  std::vector<std::pair<std::string, ordered_json>> fields_;
};

std::string describe(const WitnessReport& w) {
  if (w.indices) return "simply connected";
  return w.spans ? "finite fundamental group" : "product with a circle";
}

ordered_json index_list(const std::vector<std::size_t>& idx) { return ordered_json(idx); }

// Input errors raised while building the orbit space are reported as parse errors.
template <typename F>
auto as_input(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    throw Error(ErrorKind::ParseError, e.what());
  }
}

WeightedOrbitSpace space_from_text(const std::string& text, std::optional<Int> rank) {
  return as_input([&] {
    auto weights = parse_tuple_list(text);
    const Int r = rank.value_or(static_cast<Int>(weights.front().size()));
    if (r < 0) throw Error(ErrorKind::ParseError, "negative rank");
    return WeightedOrbitSpace(static_cast<std::size_t>(r), std::move(weights));
  });
}

WeightedOrbitSpace space_from_argument(const std::string& arg, std::optional<Int> rank) {
  if (!arg.empty() && arg.front() == '(') return space_from_text(arg, rank);
  return as_input([&] {
    WeightedOrbitSpace s = orbit_space_from_json(read_json_file(arg));
    if (rank && static_cast<std::size_t>(*rank) != s.rank())
      throw Error(ErrorKind::ParseError, "--rank disagrees with the rank in " + arg);
    return s;
  });
}

std::vector<WeightedOrbitSpace> spaces(const Options& o, std::size_t wanted) {
  std::vector<WeightedOrbitSpace> out;
  if (!o.weights.empty()) out.push_back(space_from_text(o.weights, o.rank));
  for (const auto& in : o.inputs) out.push_back(space_from_argument(in, o.rank));
  if (out.size() != wanted)
    throw Error(ErrorKind::ParseError, "expected " + std::to_string(wanted) + " orbit space(s), got " +
                                           std::to_string(out.size()));
  return out;
}

ActionParams action(const Options& o) {
  return as_input([&]() -> ActionParams {
    if (!o.circle.empty()) return circle_from_tuple(parse_tuple(o.circle));
    if (!o.t2.empty()) return t2_from_tuple(parse_tuple(o.t2));
    if (o.inputs.size() == 1) return action_from_json(read_json_file(o.inputs.front()));
    throw Error(ErrorKind::ParseError, "no action given (use --circle, --t2 or an action file)");
  });
}

// ---------------------------------------------------------------------------

int cmd_legal(const Options& o, Report& r) {
  const auto s = spaces(o, 1).front();
  const auto rep = is_legal(s);
  r.add("weights", s.to_string());
  r.add("legal", rep.legal);
  ordered_json failing = ordered_json::array();
  for (const auto& [i, j] : rep.failing_pairs) failing.push_back({i, j});
  r.add("failing_pairs", failing);
  r.add("spans", rep.spans);
  r.add("certificate", rep.simply_connected_certificate ? index_list(*rep.simply_connected_certificate)
                                                        : ordered_json(nullptr));
  r.add("product_split", rep.product_split);
  return rep.legal ? kOk : kIllegalOrbitSpace;
}

int cmd_canon(const Options& o, Report& r) {
  const auto s = spaces(o, 1).front();
  const auto c = canonicalize(s, o.oriented);
  r.add("input", s.to_string());
  r.add("canonical", c.space.to_string());
  std::vector<IntVector> rows;
  for (std::size_t i = 0; i < c.transform.rows(); ++i) rows.push_back(c.transform.row(i));
  r.add("transform", rows);
  r.add("start", c.start);
  r.add("reversed", c.reversed);
  r.add("oriented", o.oriented);
  return kOk;
}

int cmd_equiv(const Options& o, Report& r) {
  const auto s = spaces(o, 2);
  const bool eq = are_equivalent(s[0], s[1], o.oriented);
  r.add("first", s[0].to_string());
  r.add("second", s[1].to_string());
  r.add("equivalent", eq);
  r.add("oriented", o.oriented);
  return kOk;
}

int cmd_pi1(const Options& o, Report& r) {
  const auto s = spaces(o, 1).front();
  const auto bound = pi1_bound(s);
  const auto witness = simply_connected_witness(s);
  r.add("weights", s.to_string());
  r.add("pi1_bound", bound.to_string());
  r.add("witness", witness.indices ? index_list(*witness.indices) : ordered_json(nullptr));
  r.add("conclusion", describe(witness));
  if (s.rank() == 3 && s.size() == 4 && is_legal(s).legal) {
    const auto canonical = canonicalize(s).space;
    r.add("pi1_exact", pi1_dim5_exact(canonical).to_string());
  }
  return kOk;
}

int cmd_classify(const Options& o, Report& r) {
  const auto s = spaces(o, 1).front();
  r.add("weights", s.to_string());
  if (s.rank() == 2) {
    r.add("type", classify_dim4(s).to_string());
    return kOk;
  }
  if (s.rank() != 3) throw Error(ErrorKind::UnsupportedRank, "classification covers ranks 2 and 3");
  const auto type = classify_dim5(s);
  r.add("type", type.to_string());
  if (s.size() == 4 && type.tag != ManifoldType::Tag::ProductWithCircle) {
    const auto canonical = canonicalize(s).space;
    r.add("canonical", canonical.to_string());
    r.add("pi1", pi1_dim5_exact(canonical).to_string());
    const auto lens = boundary_lens_spaces(canonical);
    r.add("L1", lens.l1.to_string());
    r.add("L2", lens.l2.to_string());
    if (type.tag == ManifoldType::Tag::S3xS2 || type.tag == ManifoldType::Tag::S3twistS2)
      r.add("params", to_json(extract_dim5_params(canonical)));
  }
  return kOk;
}

int cmd_realize(const Options& o, Report& r) {
  const auto s = spaces(o, 1).front();
  r.add("weights", s.to_string());
  if (s.rank() == 2) {
    const auto p = realize_dim4(s);
    r.add("type", classify_dim4(s).to_string());
    r.add("action", to_json(p));
    r.add("induced", t2_quotient_diagram(p).orbit_space->to_string());
  } else if (s.rank() == 3) {
    const auto p = realize_dim5(s);
    r.add("type", classify_dim5(s).to_string());
    r.add("action", to_json(p));
    r.add("induced", circle_quotient_diagram(p).orbit_space->to_string());
  } else {
    throw Error(ErrorKind::UnsupportedRank, "realization covers ranks 2 and 3");
  }
  r.add("verified", true);
  return kOk;
}

int cmd_extend(const Options& o, Report& r) {
  const auto a = action(o);
  const auto* circle = std::get_if<CircleActionParams>(&a);
  if (!circle) throw Error(ErrorKind::ParseError, "extend needs a circle action");
  const auto result = extend_circle_to_t2(*circle, o.bound);
  r.add("circle", to_json(*circle));
  r.add("status", to_string(result.status));
  r.add("bound", result.bound);
  if (result.witness) {
    const auto& w = *result.witness;
    r.add("slope", std::vector<Int>{w.p, w.q, 1});
    r.add("shears", ordered_json{{"k", w.k}, {"l", w.l}, {"m", w.m}, {"n", w.n}});
    r.add("t2", to_json(w.t2));
  }
  switch (result.status) {
    case ExtensionResult::Status::Found: return kOk;
    case ExtensionResult::Status::NecessaryConditionFails: return kProvedNegative;
    case ExtensionResult::Status::SearchExhausted: return kSearchExhausted;
  }
  return kInternalError;
}

int cmd_bundle(const Options& o, Report& r) {
  const auto a = action(o);
  const auto* base = std::get_if<T2ActionParams>(&a);
  if (!base) throw Error(ErrorKind::ParseError, "bundle needs a T2 action");
  if (o.slope.empty()) throw Error(ErrorKind::ParseError, "bundle needs --slope \"(p,q)\"");
  const IntVector pq = as_input([&] { return parse_tuple(o.slope); });
  if (pq.size() != 2) throw Error(ErrorKind::ParseError, "--slope takes two integers");
  r.add("base", to_json(*base));
  r.add("base_type", classify_t2_quotient(*base).to_string());
  r.add("slope", pq);
  r.add("circle", to_json(sub_circle(*base, pq[0], pq[1])));
  r.add("total_space", circle_bundle_total_space(*base, pq[0], pq[1]).to_string());
  return kOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("inputs", o.inputs, "orbit-space or action JSON files, or inline \"(..),(..)\" weights");
  sub->add_option("--rank", o.rank, "torus rank");
  sub->add_option("--weights", o.weights, "inline weights, e.g. \"(1,0),(0,1)\"");
  sub->add_option("--format", o.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  sub->add_option("--out", o.out, "write the result to this file");
  sub->add_flag("--oriented", o.oriented, "do not allow reversing the boundary orientation");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Weighted orbit spaces of torus actions and their biquotient realizations", "torusact"};
  app.require_subcommand(1);

  struct Verb {
    const char* name;
    const char* help;
    int (*fn)(const Options&, Report&);
  };
  static constexpr Verb verbs[] = {
      {"legal", "check legality, spanning and a simply connected certificate", cmd_legal},
      {"canon", "canonical form and reparametrization", cmd_canon},
      {"equiv", "decide equivalence of two orbit spaces", cmd_equiv},
      {"pi1", "fundamental group bound", cmd_pi1},
      {"classify", "manifold type", cmd_classify},
      {"realize", "action on S3xS3 realizing the orbit space", cmd_realize},
      {"extend", "extend a free circle action to a free T2 action", cmd_extend},
      {"bundle", "total space of a circle sub-bundle", cmd_bundle},
  };
  std::vector<std::pair<CLI::App*, const Verb*>> subs;
  for (const auto& v : verbs) {
    auto* sub = app.add_subcommand(v.name, v.help);
    add_common(sub, o);
    subs.emplace_back(sub, &v);
  }
  for (auto& [sub, verb] : subs) {
    const std::string name = verb->name;
    if (name == "extend") {
      sub->add_option("--circle", o.circle, "circle exponents \"(a,b,c,d)\"");
      sub->add_option("--bound", o.bound, "search radius");
    }
    if (name == "bundle") {
      sub->add_option("--t2", o.t2, "T2 exponents \"(a,b,c,d,n,k,m,l)\"");
      sub->add_option("--slope", o.slope, "circle slope \"(p,q)\" inside the T2");
    }
  }
  auto* census_cmd = app.add_subcommand("census", "enumerate canonical classes");
  census_cmd->add_option("--rank", o.rank, "torus rank (2 or 3)")->required();
  census_cmd->add_option("--bound", o.bound, "entry bound")->required();
  census_cmd->add_option("--format", o.format, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));
  census_cmd->add_option("--out", o.out, "write the census to this file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    const OutputFormat format = parse_format(o.format);
    std::ostringstream buffer;
    int code = kOk;
    if (census_cmd->parsed()) {
      if (*o.rank < 0) throw Error(ErrorKind::ParseError, "negative rank");
      if (*o.bound < 0) throw Error(ErrorKind::ParseError, "negative bound");
      const Census c = census_parallel(static_cast<std::size_t>(*o.rank), *o.bound);
      write_census(c, format, buffer);
    } else {
      Report report;
      for (auto& [sub, verb] : subs)
        if (sub->parsed()) {
          report.add("command", verb->name);
          code = verb->fn(o, report);
        }
      report.render(format, buffer);
    }
    if (o.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw Error(ErrorKind::ParseError, "cannot write '" + o.out + "'");
      file << buffer.str();
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::ParseError: return kParseError;
      case ErrorKind::IllegalOrbitSpace: return kIllegalOrbitSpace;
      default: return kLibraryError;
    }
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace torusact::cli
