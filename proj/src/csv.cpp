#include "netfe/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "netfe/error.hpp"

namespace netfe {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line_no, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("unparseable " + std::string(what) + " '" + s + "' at line " +
                     std::to_string(line_no));
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (lines.empty()) throw InputError("'" + path + "' is empty");
  return lines;
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::vector<std::tuple<std::string, std::string, double>> parse_edge_csv(
    const std::string& path) {
  auto lines = read_lines(path);
  auto header = split_csv_line(lines[0]);
  // projection exports (j,jprime,w) are edge lists too
  const bool plain = header.size() >= 2 && header[0] == "i" && header[1] == "j";
  const bool projected =
      header.size() == 3 && header[0] == "j" && header[1] == "jprime";
  if (!(plain || projected) || header.size() > 3 ||
      (header.size() == 3 && header[2] != "w")) {
    throw InputError("edge CSV must have header 'i,j[,w]' or 'j,jprime,w' (line 1)");
  }
  const bool has_w = header.size() == 3;

  std::vector<std::tuple<std::string, std::string, double>> rows;
  rows.reserve(lines.size() - 1);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (blank(lines[k])) continue;
    auto f = split_csv_line(lines[k]);
    if (f.size() != header.size()) {
      throw InputError("expected " + std::to_string(header.size()) +
                       " fields at line " + std::to_string(k + 1));
    }
    const double w = has_w ? parse_double(f[2], k + 1, "weight") : 1.0;
    if (f[0].empty() || f[1].empty()) {
      throw InputError("empty vertex id at line " + std::to_string(k + 1));
    }
    if (f[0] == f[1]) {
      throw InputError("loop edge (" + f[0] + "," + f[1] + ") at line " +
                       std::to_string(k + 1));
    }
    if (!(w > 0.0)) {
      throw InputError("non-positive weight at line " + std::to_string(k + 1));
    }
    rows.emplace_back(f[0], f[1], w);
  }
  if (rows.empty()) throw InputError("'" + path + "' has no data rows");
  return rows;
}

Graph read_edge_csv(const std::string& path) {
  return build_graph_labeled(parse_edge_csv(path));
}

MatchedCsv read_matched_csv(const std::string& path) {
  auto lines = read_lines(path);
  auto header = split_csv_line(lines[0]);
  if (header.size() < 3 || header[0] != "i" || header[1] != "j") {
    throw InputError("matched CSV must start with columns 'i,j' (line 1)");
  }
  std::size_t col = 2;
  bool has_w = false;
  if (header[col] == "w") {
    has_w = true;
    ++col;
  }
  if (col >= header.size() || header[col] != "y") {
    throw InputError("matched CSV is missing the outcome column 'y' (line 1)");
  }
  const std::size_t y_col = col++;
  const std::size_t p = header.size() - col;
  for (std::size_t c = 0; c < p; ++c) {
    if (header[col + c] != "x" + std::to_string(c + 1)) {
      throw InputError("covariate columns must be named x1..xp (line 1)");
    }
  }

  MatchedCsv out;
  out.has_weights = has_w;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (blank(lines[k])) continue;
    auto f = split_csv_line(lines[k]);
    if (f.size() != header.size()) {
      throw InputError("expected " + std::to_string(header.size()) +
                       " fields at line " + std::to_string(k + 1));
    }
    MatchedRow row;
    row.i = f[0];
    row.j = f[1];
    row.y = parse_double(f[y_col], k + 1, "outcome");
    row.x.reserve(p);
    for (std::size_t c = 0; c < p; ++c) {
      row.x.push_back(parse_double(f[col + c], k + 1, "covariate"));
    }
    out.rows.push_back(std::move(row));
    out.w.push_back(has_w ? parse_double(f[2], k + 1, "weight") : 1.0);
  }
  if (out.rows.empty()) throw InputError("'" + path + "' has no data rows");
  return out;
}

void write_edge_csv(const std::string& path, const Graph& g) {
  std::ofstream outf(path);
  if (!outf) throw InputError("cannot write '" + path + "'");
  outf << "i,j,w\n";
  std::ostringstream buf;
  buf.precision(17);
  for (const Edge& e : g.edges()) {
    buf.str("");
    buf << g.original_id(e.i) << ',' << g.original_id(e.j) << ',' << e.w << '\n';
    outf << buf.str();
  }
}

void write_projection_csv(const std::string& path, const Projection& proj) {
  std::ofstream outf(path);
  if (!outf) throw InputError("cannot write '" + path + "'");
  outf << "j,jprime,w\n";
  std::ostringstream buf;
  buf.precision(17);
  for (const Edge& e : proj.graph.edges()) {
    buf.str("");
    buf << proj.graph.original_id(e.i) << ',' << proj.graph.original_id(e.j) << ','
        << e.w << '\n';
    outf << buf.str();
  }
}

void write_matched_csv(const std::string& path, const BipartiteData& bd) {
  std::ofstream outf(path);
  if (!outf) throw InputError("cannot write '" + path + "'");
  outf << "i,j,y";
  for (int c = 1; c <= bd.p(); ++c) outf << ",x" << c;
  outf << '\n';
  std::ostringstream buf;
  buf.precision(17);
  for (int r = 0; r < bd.m(); ++r) {
    buf.str("");
    buf << bd.ids1()[bd.type1_of_row(r) - 1] << ','
        << bd.ids2()[bd.type2_of_row(r) - 1] << ',' << bd.y()[r];
    for (int c = 0; c < bd.p(); ++c) buf << ',' << bd.X()(r, c);
    buf << '\n';
    outf << buf.str();
  }
}

void write_fit_csv(const std::string& path, const std::vector<std::string>& ids,
                   const Eigen::VectorXd& alpha, const Eigen::VectorXd& se) {
  std::ofstream outf(path);
  if (!outf) throw InputError("cannot write '" + path + "'");
  outf << "vertex_id,alpha,se\n";
  std::ostringstream buf;
  buf.precision(17);
  for (int v = 0; v < alpha.size(); ++v) {
    buf.str("");
    buf << ids[v] << ',' << alpha[v] << ',' << (se.size() > v ? se[v] : 0.0) << '\n';
    outf << buf.str();
  }
}

}  // namespace netfe
