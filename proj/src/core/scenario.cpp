#include "ltlgrid/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ltlgrid/error.hpp"

namespace ltlgrid {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::string strip_comment(const std::string& line) {
  auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

[[noreturn]] void bad(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::syntax, "scenario line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T number(const std::string& s, std::size_t line) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) bad(line, "bad number '" + s + "'");
  return v;
}

bool flag(const std::string& s, std::size_t line) {
  if (s == "on" || s == "true" || s == "1") return true;
  if (s == "off" || s == "false" || s == "0") return false;
  bad(line, "expected on/off, got '" + s + "'");
}

Cell cell_of(const std::string& s, std::size_t line) {
  auto comma = s.find(',');
  if (comma == std::string::npos) bad(line, "expected cell as row,col: '" + s + "'");
  return {number<int>(s.substr(0, comma), line), number<int>(s.substr(comma + 1), line)};
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@'; }

void check_definition_name(const std::string& name, std::size_t line) {
  static const std::set<std::string> reserved{"X", "F", "G", "U", "R", "true", "false"};
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])) || reserved.contains(name))
    bad(line, "invalid definition name '" + name + "'");
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') bad(line, "invalid definition name '" + name + "'");
  if (name[0] == 'p' && name.size() > 1 && std::isdigit(static_cast<unsigned char>(name[1])))
    bad(line, "definition name '" + name + "' looks like a predicate");
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::map<char, std::string> legend;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> grid_blocks;
  bool saw_size = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    std::vector<std::string> args;
    for (std::string a; ls >> a;) args.push_back(a);
    auto rest_of_line = [&] { return trim(std::string_view(line).substr(key.size())); };
    auto need = [&](std::size_t n) {
      if (args.size() != n) bad(line_no, "'" + key + "' expects " + std::to_string(n) + " argument(s)");
    };
    if (key == "name") {
      s.name = rest_of_line();
    } else if (key == "size") {
      need(2);
      s.width = number<int>(args[0], line_no);
      s.height = number<int>(args[1], line_no);
      saw_size = true;
    } else if (key == "sensor_range") {
      need(1);
      s.sensor_range = number<double>(args[0], line_no);
    } else if (key == "seed") {
      need(1);
      s.seed = number<std::uint64_t>(args[0], line_no);
    } else if (key == "max_steps") {
      need(1);
      s.max_steps = number<std::size_t>(args[0], line_no);
    } else if (key == "accepting_target") {
      need(1);
      s.accepting_target = number<std::size_t>(args[0], line_no);
    } else if (key == "policy") {
      need(1);
      if (args[0] == "minimal")
        s.policy = SymbolPolicy::minimal;
      else if (args[0] == "random")
        s.policy = SymbolPolicy::random;
      else
        bad(line_no, "unknown policy '" + args[0] + "'");
    } else if (key == "occlusion") {
      need(1);
      s.occlusion = flag(args[0], line_no);
    } else if (key == "relaxed_avoidance") {
      need(1);
      s.relaxed_avoidance = flag(args[0], line_no);
    } else if (key == "overlap") {
      need(2);
      s.relation.declare_overlap(args[0], args[1]);
    } else if (key == "define") {
      if (args.empty()) bad(line_no, "'define' expects a name and a subformula");
      check_definition_name(args[0], line_no);
      std::string body = trim(std::string_view(rest_of_line()).substr(args[0].size()));
      if (body.empty()) bad(line_no, "empty definition for '" + args[0] + "'");
      s.definitions.emplace_back(args[0], body);
    } else if (key == "formula") {
      if (!s.formula.empty()) bad(line_no, "formula given twice");
      s.formula = rest_of_line();
    } else if (key == "robot") {
      if (args.size() != 3 && args.size() != 5) bad(line_no, "expected 'robot <j> <row> <col> [speed <v>]'");
      RobotSpec r{number<int>(args[0], line_no), {number<int>(args[1], line_no), number<int>(args[2], line_no)}, 1.0};
      if (args.size() == 5) {
        if (args[3] != "speed") bad(line_no, "expected 'speed'");
        r.speed = number<double>(args[4], line_no);
      }
      s.robots.push_back(r);
    } else if (key == "region") {
      if (args.empty()) bad(line_no, "expected 'region <label> <row,col>...'");
      auto& cells = s.regions[args[0]];
      for (std::size_t i = 1; i < args.size(); ++i) cells.insert(cell_of(args[i], line_no));
    } else if (key == "obstacle") {
      for (const auto& a : args) s.obstacles.insert(cell_of(a, line_no));
    } else if (key == "legend") {
      need(2);
      if (args[0].size() != 1 || args[0] == "." || args[0] == "#") bad(line_no, "legend key must be one character other than . and #");
      legend[args[0][0]] = args[1];
    } else if (key == "grid" || key == "automaton") {
      need(0);
      std::vector<std::string> rows;
      std::size_t start = line_no;
      bool closed = false;
      while (std::getline(in, raw)) {
        ++line_no;
        if (trim(raw) == "end") {
          closed = true;
          break;
        }
        rows.push_back(raw);
      }
      if (!closed) bad(start, "'" + key + "' block without 'end'");
      if (key == "grid") {
        grid_blocks.emplace_back(start, std::move(rows));
      } else {
        std::string body;
        for (const auto& r : rows) body += r + "\n";
        s.automaton = body;
      }
    } else {
      bad(line_no, "unknown key '" + key + "'");
    }
  }
  if (!saw_size) throw Error(ErrorCode::validation, "scenario has no 'size' line");
  for (const auto& [start, rows] : grid_blocks) {
    if (static_cast<int>(rows.size()) != s.height) bad(start, "grid block must have one row per grid row");
    for (int r = 0; r < s.height; ++r) {
      std::string row = trim(rows[r]);
      if (static_cast<int>(row.size()) != s.width) bad(start + 1 + r, "grid row has the wrong width");
      for (int c = 0; c < s.width; ++c) {
        char ch = row[c];
        if (ch == '.') continue;
        if (ch == '#') {
          s.obstacles.insert({r, c});
          continue;
        }
        auto it = legend.find(ch);
        if (it == legend.end()) bad(start + 1 + r, std::string("unknown grid character '") + ch + "'");
        s.regions[it->second].insert({r, c});
      }
    }
  }
  std::sort(s.robots.begin(), s.robots.end(), [](const RobotSpec& a, const RobotSpec& b) { return a.index < b.index; });
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open scenario '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string save_scenario(const Scenario& s) {
  std::ostringstream out;
  if (!s.name.empty()) out << "name " << s.name << "\n";
  out << "size " << s.width << " " << s.height << "\n";
  out << "sensor_range " << format_double(s.sensor_range) << "\n";
  out << "seed " << s.seed << "\n";
  out << "max_steps " << s.max_steps << "\n";
  out << "accepting_target " << s.accepting_target << "\n";
  out << "policy " << (s.policy == SymbolPolicy::minimal ? "minimal" : "random") << "\n";
  out << "occlusion " << (s.occlusion ? "on" : "off") << "\n";
  out << "relaxed_avoidance " << (s.relaxed_avoidance ? "on" : "off") << "\n";
  for (const auto& [a, b] : s.relation.overlaps()) out << "overlap " << a << " " << b << "\n";
  for (const auto& [name, body] : s.definitions) out << "define " << name << " " << body << "\n";
  if (!s.formula.empty()) out << "formula " << s.formula << "\n";
  for (const auto& r : s.robots) {
    out << "robot " << r.index << " " << r.start.row << " " << r.start.col;
    if (r.speed != 1.0) out << " speed " << format_double(r.speed);
    out << "\n";
  }
  for (const auto& [label, cells] : s.regions) {
    out << "region " << label;
    for (Cell c : cells) out << " " << c.row << "," << c.col;
    out << "\n";
  }
  out << "grid\n";
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) out << (s.obstacles.contains({r, c}) ? '#' : '.');
    out << "\n";
  }
  out << "end\n";
  if (!s.automaton.empty()) {
    out << "automaton\n" << s.automaton;
    if (s.automaton.back() != '\n') out << "\n";
    out << "end\n";
  }
  return out.str();
}

std::string expanded_formula(const Scenario& s) {
  std::string text = s.formula;
  // later definitions may use earlier ones, so expand repeatedly
  for (std::size_t round = 0; round <= s.definitions.size(); ++round) {
    bool changed = false;
    for (const auto& [name, body] : s.definitions) {
      std::string out;
      std::size_t i = 0;
      while (i < text.size()) {
        if (is_name_char(text[i])) {
          std::size_t j = i;
          while (j < text.size() && is_name_char(text[j])) ++j;
          std::string_view word(text.data() + i, j - i);
          if (word == name) {
            out += "(" + body + ")";
            changed = true;
          } else {
            out += word;
          }
          i = j;
        } else {
          out += text[i++];
        }
      }
      text = std::move(out);
    }
    if (!changed) return text;
  }
  throw Error(ErrorCode::validation, "definitions are recursive");
}

Formula scenario_formula(const Scenario& s) {
  ParseOptions opts;
  opts.regions = std::set<std::string>{};
  for (const auto& [label, cells] : s.regions) opts.regions->insert(label);
  return parse_ltl(expanded_formula(s), opts);
}

Nba scenario_automaton(const Scenario& s) {
  if (!s.automaton.empty()) return import_automaton(s.automaton);
  return translate(scenario_formula(s));
}

TrueEnvironment make_environment(const Scenario& s) {
  std::map<std::string, std::vector<Cell>> regions;
  for (const auto& [label, cells] : s.regions) regions[label] = {cells.begin(), cells.end()};
  return TrueEnvironment(RegionLayout(s.width, s.height, regions, s.relation), {s.obstacles.begin(), s.obstacles.end()});
}

std::vector<RobotPose> initial_poses(const Scenario& s) {
  std::vector<RobotPose> out;
  for (const auto& r : s.robots) out.push_back({r.index, r.start});
  return out;
}

Symbol initial_symbol(const Scenario& s) {
  auto env = make_environment(s);
  auto poses = initial_poses(s);
  return label(poses, env);
}

void validate_scenario(const Scenario& s) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::validation, m); };
  if (s.width <= 0 || s.height <= 0) fail("grid dimensions must be positive");
  if (s.sensor_range < 1.0) fail("sensor range must be at least 1");
  if (s.robots.empty()) fail("scenario has no robots");
  if (s.formula.empty() && s.automaton.empty()) fail("scenario has neither a formula nor an automaton");
  auto in = [&](Cell c) { return c.row >= 0 && c.col >= 0 && c.row < s.height && c.col < s.width; };
  for (Cell c : s.obstacles)
    if (!in(c)) fail("obstacle outside the grid");
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const auto& r = s.robots[i];
    if (r.index != static_cast<int>(i) + 1) fail("robots must be numbered 1..N without gaps");
    if (!in(r.start)) fail("robot " + std::to_string(r.index) + " starts outside the grid");
    if (s.obstacles.contains(r.start)) fail("robot " + std::to_string(r.index) + " starts on an obstacle");
    if (!(r.speed > 0.0 && r.speed <= 1.0)) fail("robot speed must be in (0, 1]");
  }
  for (const auto& [a, b] : s.relation.overlaps())
    if (!s.regions.contains(a) || !s.regions.contains(b)) fail("overlap names an undeclared region");
  make_environment(s);  // validates region geometry
  std::set<AtomicPredicate> aps;
  if (!s.formula.empty()) aps = atomic_predicates(scenario_formula(s));
  if (!s.automaton.empty()) {
    Nba a = import_automaton(s.automaton);
    aps.insert(a.ap_universe().begin(), a.ap_universe().end());
  }
  for (const auto& ap : aps) {
    if (ap.robot > static_cast<int>(s.robots.size()))
      fail("predicate " + ap.to_string() + " names a robot that does not exist");
    if (ap.region != kObstacleRegion && !s.regions.contains(ap.region))
      fail("predicate " + ap.to_string() + " names an undeclared region");
  }
}

}  // namespace ltlgrid
