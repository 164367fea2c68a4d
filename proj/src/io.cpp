#include "pff/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pff {

bool StepRow::operator==(const StepRow& o) const {
  return time == o.time && u == o.u && reaction == o.reaction && n_stag == o.n_stag &&
         n_nr_u == o.n_nr_u && n_nr_d == o.n_nr_d;
}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return {buf.data(), ptr};
}

namespace {

constexpr const char* kHeader = "time,u,reaction,n_stag,n_nr_u,n_nr_d";

template <typename T>
T parse_field(std::string_view s, const std::string& where) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error(where + ": cannot parse '" + std::string(s) + "'");
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_csv(const std::vector<StepRow>& rows, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.time) << ',' << format_double(r.u) << ','
        << format_double(r.reaction) << ',' << r.n_stag << ',' << r.n_nr_u << ',' << r.n_nr_d
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<StepRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  std::vector<StepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (;;) {
      const auto c = rest.find(',');
      f.push_back(rest.substr(0, c));
      if (c == std::string_view::npos) break;
      rest.remove_prefix(c + 1);
    }
    if (f.size() != 6) throw std::runtime_error(where + ": expected 6 fields");
    StepRow r;
    r.time = parse_field<double>(f[0], where);
    r.u = parse_field<double>(f[1], where);
    r.reaction = parse_field<double>(f[2], where);
    r.n_stag = parse_field<int>(f[3], where);
    r.n_nr_u = parse_field<int>(f[4], where);
    r.n_nr_d = parse_field<int>(f[5], where);
    rows.push_back(r);
  }
  return rows;
}

void write_vtk_snapshot(const Mesh& mesh, const Eigen::VectorXd& u, const Eigen::VectorXd& d,
                        const std::filesystem::path& path) {
  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  const bool line = mesh.kind == CellKind::Line2;
  const int per_node = line ? 1 : 2;
  if (d.size() != n || u.size() != per_node * n) {
    throw std::invalid_argument("field sizes do not match the mesh");
  }
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\nphase-field snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (const auto& node : mesh.nodes) {
    out << format_double(node.x[0]) << ' ' << format_double(node.x[1]) << " 0\n";
  }
  const int npe = line ? 2 : 4;
  out << "CELLS " << mesh.num_elements() << ' ' << mesh.num_elements() * (npe + 1) << '\n';
  for (const auto& el : mesh.elements) {
    out << npe;
    for (int a = 0; a < npe; ++a) out << ' ' << el.nodes[a];
    out << '\n';
  }
  out << "CELL_TYPES " << mesh.num_elements() << '\n';
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) out << (line ? 3 : 9) << '\n';
  out << "POINT_DATA " << n << "\nSCALARS d double 1\nLOOKUP_TABLE default\n";
  for (Eigen::Index i = 0; i < n; ++i) out << format_double(d[i]) << '\n';
  out << "VECTORS u double\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ux = u[per_node * i];
    const double uy = line ? 0.0 : u[per_node * i + 1];
    out << format_double(ux) << ' ' << format_double(uy) << " 0\n";
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

VtkData read_vtk(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error(path.string() + ": " + msg);
  };
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile Version", 0) != 0) fail("missing VTK signature");
  std::getline(in, line);  // title
  std::getline(in, line);
  if (line != "ASCII") fail("only ASCII files are supported");
  std::getline(in, line);
  if (line != "DATASET UNSTRUCTURED_GRID") fail("expected an unstructured grid");

  VtkData data;
  std::string word;
  auto expect = [&](const std::string& token) {
    if (!(in >> word) || word != token) fail("expected '" + token + "', got '" + word + "'");
  };
  std::size_t np = 0;
  expect("POINTS");
  in >> np >> word;
  data.points.resize(np);
  for (auto& p : data.points) {
    if (!(in >> p[0] >> p[1] >> p[2])) fail("truncated POINTS");
  }
  std::size_t nc = 0;
  std::size_t total = 0;
  expect("CELLS");
  in >> nc >> total;
  std::size_t counted = 0;
  data.cells.resize(nc);
  for (auto& c : data.cells) {
    int k = 0;
    if (!(in >> k) || k < 1) fail("bad cell size");
    c.resize(k);
    for (int& id : c) {
      if (!(in >> id) || id < 0 || static_cast<std::size_t>(id) >= np) fail("bad cell index");
    }
    counted += k + 1;
  }
  if (counted != total) fail("CELLS size field does not match its contents");
  expect("CELL_TYPES");
  std::size_t nt = 0;
  in >> nt;
  if (nt != nc) fail("CELL_TYPES count differs from CELLS");
  data.cell_types.resize(nt);
  for (int& t : data.cell_types) {
    if (!(in >> t)) fail("truncated CELL_TYPES");
  }
  expect("POINT_DATA");
  std::size_t npd = 0;
  in >> npd;
  if (npd != np) fail("POINT_DATA count differs from POINTS");
  expect("SCALARS");
  expect("d");
  in >> word >> word;  // type, components
  expect("LOOKUP_TABLE");
  in >> word;
  data.d.resize(np);
  for (double& v : data.d) {
    if (!(in >> v)) fail("truncated scalar d");
  }
  expect("VECTORS");
  expect("u");
  in >> word;
  data.u.resize(np);
  for (auto& v : data.u) {
    if (!(in >> v[0] >> v[1] >> v[2])) fail("truncated vector u");
  }
  if (in >> word) fail("trailing content '" + word + "'");
  return data;
}

}  // namespace pff
