#pragma once

// Command-line front end. `run` takes the argument vector without the program
// name and writes to the given streams, so it can be driven from tests.
//
// Exit codes: 0 success, 1 invalid element, 2 malformed input, 3 internal error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "fanrot/acceptance.hpp"
#include "fanrot/dyadic.hpp"
#include "fanrot/errors.hpp"
#include "fanrot/json_io.hpp"
#include "fanrot/pl_map.hpp"
#include "fanrot/rotation.hpp"
#include "fanrot/sharp.hpp"

namespace fanrot::cli {

using json_io::Json;

enum ExitCode : int { ok = 0, invalid = 1, malformed = 2, internal = 3 };

namespace detail {

inline std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream is(s);
  while (std::getline(is, part, sep)) out.push_back(part);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline long long parse_small(const std::string& text, const char* what) {
  Int v = parse_int(trim(text));
  if (v > Int(1'000'000'000'000LL) || v < Int(-1'000'000'000'000LL)) {
    throw InvalidError(std::string(what) + " " + v.str() + " is too large");
  }
  return static_cast<long long>(v);
}

}  // namespace detail

inline PLAutomorphism parse_element(const std::string& spec, std::istream* in = nullptr);

/// Element from JSON: a fan+matrices object, a dyadic map object, a word
/// (array applied left to right, first entry first) or a spec string.
inline PLAutomorphism element_from_json(const Json& j) {
  if (j.is_string()) return parse_element(j.get<std::string>());
  if (j.is_array()) {
    if (j.empty()) return PLAutomorphism::identity();
    PLAutomorphism result = element_from_json(j[0]);
    for (std::size_t i = 1; i < j.size(); ++i) result = compose(element_from_json(j[i]), result);
    return result;
  }
  if (j.is_object()) {
    if (j.contains("rays") || j.contains("matrices")) return json_io::element_from_json(j);
    if (j.contains("breakpoints") || j.contains("images")) return from_dyadic(json_io::dyadic_map_from_json(j));
    if (j.contains("word")) return element_from_json(j.at("word"));
  }
  throw ParseError("JSON element must be {\"rays\", \"matrices\"}, {\"breakpoints\", \"images\"} or a word array");
}

/// Element specs:
///   rot:p/q              rotation by p/q
///   random:seed:length   reproducible random word
///   mat:a,b,c,d          linear map
///   id                   identity
///   {...} or [...]       inline JSON
///   -                    read from standard input
///   anything else        path of a file holding one of the above
inline PLAutomorphism parse_element(const std::string& raw, std::istream* in) {
  std::string spec = detail::trim(raw);
  if (spec.empty()) throw ParseError("empty element spec");
  if (spec == "-") {
    if (in == nullptr) throw ParseError("'-' is only allowed as a top-level spec");
    std::string text((std::istreambuf_iterator<char>(*in)), std::istreambuf_iterator<char>());
    return parse_element(detail::trim(text));
  }
  if (spec.front() == '{' || spec.front() == '[') return element_from_json(json_io::parse(spec));
  if (spec == "id" || spec == "identity") return PLAutomorphism::identity();
  if (spec.starts_with("rot:")) {
    auto parts = detail::split(spec.substr(4), '/');
    if (parts.size() != 2) throw ParseError("expected rot:p/q, got '" + spec + "'");
    return construct_rotation(detail::parse_small(parts[0], "numerator"), detail::parse_small(parts[1], "denominator"));
  }
  if (spec.starts_with("random:")) {
    auto parts = detail::split(spec.substr(7), ':');
    if (parts.size() != 2) throw ParseError("expected random:seed:length, got '" + spec + "'");
    long long seed = detail::parse_small(parts[0], "seed");
    long long length = detail::parse_small(parts[1], "length");
    if (seed < 0) throw InvalidError("seed must be non-negative");
    if (length < 1 || length > 100'000) throw InvalidError("random word length must lie in [1, 100000]");
    return random_element(static_cast<std::uint64_t>(seed), static_cast<std::size_t>(length));
  }
  if (spec.starts_with("mat:")) {
    auto parts = detail::split(spec.substr(4), ',');
    if (parts.size() != 4) throw ParseError("expected mat:a,b,c,d, got '" + spec + "'");
    return PLAutomorphism::linear(UnimodularMatrix::from_entries(parse_int(detail::trim(parts[0])),
                                                                 parse_int(detail::trim(parts[1])),
                                                                 parse_int(detail::trim(parts[2])),
                                                                 parse_int(detail::trim(parts[3]))));
  }
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec, ec)) {
    std::ifstream file(spec);
    std::string text((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
    text = detail::trim(text);
    if (text.empty()) throw ParseError("file '" + spec + "' is empty");
    if (text.front() != '{' && text.front() != '[' && !text.starts_with("rot:") && !text.starts_with("random:") &&
        !text.starts_with("mat:") && text != "id" && text != "identity") {
      throw ParseError("file '" + spec + "' does not hold an element");
    }
    return parse_element(text);
  }
  throw ParseError("unrecognized element spec '" + spec + "' (not a constructor, JSON, or readable file)");
}

struct Options {
  std::string command;
  bool json = false;
  std::size_t cap = 64;
  std::size_t iterations = 100000;
  double x0 = 0.0;
  std::string to;
};

/// Result of one command on one element.
struct Outcome {
  int code = ok;
  std::string text;  // text-mode output, without trailing newline
  Json json;         // --json payload
  bool to_stderr = false;
};

namespace detail {

inline Outcome failure(int code, const char* kind, const std::string& message, const std::string& command) {
  Outcome o;
  o.code = code;
  o.to_stderr = command != "validate";
  o.text = (command == "validate" && code == invalid ? "invalid: " : "error: ") + message;
  o.json = Json{{"error", Json{{"kind", kind}, {"message", message}}}};
  return o;
}

inline Outcome execute(const Options& opt, const std::string& spec, std::istream* in) {
  Outcome o;
  PLAutomorphism f = parse_element(spec, in);
  const std::string& cmd = opt.command;
  if (cmd == "validate") {
    PLAutomorphism c = f.canonical();
    std::ostringstream os;
    os << "valid: " << f.fan().size() << " rays, " << (f.fan().is_regular() ? "regular" : "irregular")
       << " fan, canonical form on " << c.fan().size() << " rays";
    o.text = os.str();
    o.json = Json{{"valid", true},
                  {"rays", f.fan().size()},
                  {"regular", f.fan().is_regular()},
                  {"canonical", json_io::to_json(c)}};
  } else if (cmd == "rotnum") {
    RotationReport rep = rotation_report(f);
    o.text = rep.rho.str();
    o.json = Json{{"rotation_number", rep.rho.str()},
                  {"numerator", rep.rho.numerator().str()},
                  {"denominator", rep.rho.denominator().str()},
                  {"case", rep.kind == RotationReport::Case::ray_permutation ? "ray_permutation" : "sector_cycle"},
                  {"period", rep.period}};
  } else if (cmd == "order") {
    RotationReport rep = rotation_report(f);
    auto order = finite_order(f, rep, opt.cap);
    o.text = order ? std::to_string(*order) : "infinite (cap " + std::to_string(opt.cap) + ")";
    o.json = Json{{"order", order ? Json(*order) : Json("infinite")}, {"cap", opt.cap},
                  {"rotation_number", rep.rho.str()}};
  } else if (cmd == "decompose") {
    Json steps = json_io::to_json(decompose_simple(f));
    o.text = steps.dump();
    o.json = Json{{"steps", std::move(steps)}};
  } else if (cmd == "detfan") {
    DeterministicFan det = deterministic_refinement(f);
    o.text = to_string(det.fan);
    o.json = json_io::to_json(det);
  } else if (cmd == "convert") {
    Json result = opt.to == "dyadic" ? json_io::to_json(to_dyadic(f)) : json_io::to_json(f.canonical());
    o.text = result.dump();
    o.json = Json{{"to", opt.to}, {"result", std::move(result)}};
  } else if (cmd == "estimate") {
    double e = estimate_rotation(f, opt.iterations, opt.x0);
    std::ostringstream os;
    os << std::setprecision(12) << e;
    o.text = os.str();
    o.json = Json{{"estimate", e}, {"iterations", opt.iterations}, {"x0", opt.x0}};
  } else {
    throw InternalError("unknown command " + cmd);
  }
  return o;
}

inline Outcome guarded(const Options& opt, const std::string& spec, std::istream* in) {
  Outcome o;
  try {
    o = execute(opt, spec, in);
  } catch (const InvalidError& e) {
    o = failure(invalid, "invalid", e.what(), opt.command);
  } catch (const ParseError& e) {
    o = failure(malformed, "parse", e.what(), opt.command);
  } catch (const std::exception& e) {
    o = failure(internal, "internal", e.what(), opt.command);
  }
  Json wrapped{{"schema_version", json_io::schema_version}, {"command", opt.command}, {"spec", spec}};
  for (auto& [k, v] : o.json.items()) wrapped[k] = v;
  o.json = std::move(wrapped);
  return o;
}

inline void emit(const Options& opt, const Outcome& o, std::ostream& out, std::ostream& err) {
  if (opt.json) {
    out << o.json.dump() << '\n';
  } else {
    (o.to_stderr ? err : out) << o.text << '\n';
  }
}

inline std::vector<std::string> read_batch(const std::string& path, std::istream& in) {
  std::vector<std::string> specs;
  std::ifstream file;
  std::istream* src = &in;
  if (path != "-") {
    file.open(path);
    if (!file) throw ParseError("cannot read batch file '" + path + "'");
    src = &file;
  }
  std::string line;
  while (std::getline(*src, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    specs.push_back(line);
  }
  return specs;
}

inline int run_selftest(const Options& opt, std::ostream& out) {
  auto results = acceptance::run_all();
  bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  if (opt.json) {
    Json list = Json::array();
    for (const auto& r : results) {
      list.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    }
    out << Json{{"schema_version", json_io::schema_version}, {"command", "selftest"}, {"pass", all},
                {"criteria", std::move(list)}}
               .dump()
        << '\n';
  } else {
    for (const auto& r : results) out << acceptance::format(r) << '\n';
  }
  return all ? ok : invalid;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Rotation numbers of elements of Thompson's group T acting on Z^2", "fanrot"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  std::string spec, batch;
  app.add_flag("--json", opt.json, "Machine-readable output");
  app.add_option("--batch", batch, "File with one element spec per line ('-' for stdin)");

  auto element_command = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("spec", spec, "Element spec: rot:p/q, random:seed:length, mat:a,b,c,d, id, JSON, file or -");
    return sub;
  };
  element_command("validate", "Check an element and report its shape");
  element_command("rotnum", "Exact rotation number p/q");
  element_command("order", "Finite order, or infinite up to the cap")->add_option("--cap", opt.cap, "Largest order tried");
  element_command("decompose", "Simple-map decomposition as JSON");
  element_command("detfan", "Rays of the deterministic fan");
  element_command("convert", "Convert between fan and dyadic presentations")
      ->add_option("--to", opt.to, "Target presentation")
      ->required()
      ->check(CLI::IsMember({"dyadic", "fan"}));
  CLI::App* est = element_command("estimate", "Floating-point rotation number estimate");
  est->add_option("--iters", opt.iterations, "Iterations")->check(CLI::PositiveNumber);
  est->add_option("--x0", opt.x0, "Starting angle as a fraction of a turn");
  app.add_subcommand("selftest", "Run the acceptance criteria");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : malformed;
  }
  opt.command = app.get_subcommands().front()->get_name();

  if (opt.command == "selftest") return detail::run_selftest(opt, out);

  if (batch.empty()) {
    if (spec.empty()) {
      err << "error: " << opt.command << " needs an element spec or --batch\n";
      return malformed;
    }
    Outcome o = detail::guarded(opt, spec, &in);
    detail::emit(opt, o, out, err);
    return o.code;
  }

  std::vector<std::string> specs;
  try {
    specs = detail::read_batch(batch, in);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return malformed;
  }
  if (!spec.empty()) specs.insert(specs.begin(), spec);
  std::vector<Outcome> results(specs.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < specs.size(); start += workers) {
    std::vector<std::future<Outcome>> running;
    std::size_t stop = std::min(specs.size(), start + workers);
    for (std::size_t i = start; i < stop; ++i) {
      running.push_back(std::async(std::launch::async, [&opt, &specs, i] { return detail::guarded(opt, specs[i], nullptr); }));
    }
    for (std::size_t i = start; i < stop; ++i) results[i] = running[i - start].get();
  }
  int code = ok;
  for (const auto& o : results) {
    detail::emit(opt, o, out, err);
    code = std::max(code, o.code);
  }
  return code;
}

}  // namespace fanrot::cli
