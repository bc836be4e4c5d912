#include "romstab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace romstab::io {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);  // binary: no CRLF translation
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string::npos) {
      out.push_back(line.substr(begin));
      break;
    }
    out.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
  return out;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  json j;
  in >> j;
  return j;
}

void dump_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

Vector vector_from_json(const json& arr) {
  Vector out;
  out.reserve(arr.size());
  for (const auto& x : arr) out.push_back(x.get<double>());
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::runtime_error("matrix rows have unequal lengths");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  if (result.ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, result.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
    throw std::runtime_error("parse_double: bad number '" + std::string(text) + "'");
  return value;
}

void write_snapshots(const std::filesystem::path& csv_path,
                     const std::filesystem::path& sidecar_path,
                     const truth::SnapshotSet& snapshots) {
  snapshots.validate();
  const std::size_t n = snapshots.dim();

  std::ofstream out = open_out(csv_path);
  out << 't';
  for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
  out << '\n';
  for (std::size_t j = 0; j < snapshots.size(); ++j) {
    out << format_double(snapshots.times[j]);
    for (double v : snapshots.states[j]) out << ',' << format_double(v);
    out << '\n';
  }

  json sidecar;
  sidecar["n"] = n;
  sidecar["s"] = snapshots.size();
  sidecar["h"] = snapshots.weights.front();
  sidecar["weights"] = "uniform";
  json blocks = json::array();
  for (const truth::Block& b : snapshots.blocks)
    blocks.push_back({{"name", b.name}, {"offset", b.offset}, {"size", b.size}});
  sidecar["blocks"] = std::move(blocks);
  dump_json(sidecar_path, sidecar);
}

truth::SnapshotSet read_snapshots(const std::filesystem::path& csv_path,
                                  const std::filesystem::path& sidecar_path) {
  const json sidecar = load_json(sidecar_path);
  const auto n = sidecar.at("n").get<std::size_t>();
  const auto h = sidecar.at("h").get<double>();

  truth::SnapshotSet set;
  set.weights = Vector(n, h);
  for (const auto& b : sidecar.at("blocks"))
    set.blocks.push_back(truth::Block{b.at("name").get<std::string>(),
                                      b.at("offset").get<std::size_t>(),
                                      b.at("size").get<std::size_t>()});

  std::ifstream in = open_in(csv_path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("snapshot CSV is empty");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != n + 1) throw std::runtime_error("snapshot CSV row width mismatch");
    set.times.push_back(parse_double(cells[0]));
    Vector state(n);
    for (std::size_t i = 0; i < n; ++i) state[i] = parse_double(cells[i + 1]);
    set.states.push_back(std::move(state));
  }
  set.validate();
  if (set.size() != sidecar.at("s").get<std::size_t>())
    throw std::runtime_error("snapshot CSV row count disagrees with the sidecar");
  return set;
}

void write_trajectory(const std::filesystem::path& csv_path, const Trajectory& traj,
                      std::string_view prefix) {
  if (traj.empty()) throw std::invalid_argument("write_trajectory: empty trajectory");
  const std::size_t n = traj.states.front().size();
  std::ofstream out = open_out(csv_path);
  out << 't';
  for (std::size_t i = 0; i < n; ++i) out << ',' << prefix << '_' << i;
  out << '\n';
  for (std::size_t j = 0; j < traj.size(); ++j) {
    out << format_double(traj.times[j]);
    for (double v : traj.states[j]) out << ',' << format_double(v);
    out << '\n';
  }
}

Trajectory read_trajectory(const std::filesystem::path& csv_path) {
  std::ifstream in = open_in(csv_path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory CSV is empty");
  const std::size_t width = split_csv_line(line).size();
  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != width) throw std::runtime_error("trajectory CSV row width mismatch");
    traj.times.push_back(parse_double(cells[0]));
    Vector state(width - 1);
    for (std::size_t i = 0; i + 1 < width; ++i) state[i] = parse_double(cells[i + 1]);
    traj.states.push_back(std::move(state));
  }
  return traj;
}

void write_basis(const std::filesystem::path& csv_path,
                 const std::filesystem::path& sidecar_path,
                 const std::filesystem::path& base_state_path, const pod::PodBasis& basis) {
  const std::size_t n = basis.dim();
  const std::size_t r = basis.order();

  std::ofstream out = open_out(csv_path);
  for (std::size_t a = 0; a < r; ++a) out << (a == 0 ? "" : ",") << "mode_" << a;
  out << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < r; ++a) {
      if (a > 0) out << ',';
      out << format_double(basis.modes(i, a));
    }
    out << '\n';
  }

  std::ofstream base = open_out(base_state_path);
  base << "x\n";
  for (double v : basis.base_state) base << format_double(v) << '\n';

  json sidecar;
  sidecar["r"] = r;
  sidecar["r_v"] = basis.r_velocity;
  sidecar["r_T"] = basis.r_temperature;
  sidecar["lambdas"] = vector_to_json(basis.eigenvalues);
  sidecar["subtract_mean"] = basis.subtract_mean;
  sidecar["base_state_file"] = base_state_path.filename().string();
  sidecar["n"] = n;
  sidecar["h"] = basis.weights.front();
  json blocks = json::array();
  for (const truth::Block& b : basis.blocks)
    blocks.push_back({{"name", b.name}, {"offset", b.offset}, {"size", b.size}});
  sidecar["blocks"] = std::move(blocks);
  json spectra = json::array();
  for (const Vector& s : basis.spectra) spectra.push_back(vector_to_json(s));
  sidecar["spectra"] = std::move(spectra);
  dump_json(sidecar_path, sidecar);
}

pod::PodBasis read_basis(const std::filesystem::path& csv_path,
                         const std::filesystem::path& sidecar_path) {
  const json sidecar = load_json(sidecar_path);
  const auto n = sidecar.at("n").get<std::size_t>();
  const auto r = sidecar.at("r").get<std::size_t>();

  pod::PodBasis basis;
  basis.r_velocity = sidecar.at("r_v").get<std::size_t>();
  basis.r_temperature = sidecar.at("r_T").get<std::size_t>();
  basis.eigenvalues = vector_from_json(sidecar.at("lambdas"));
  basis.subtract_mean = sidecar.at("subtract_mean").get<bool>();
  basis.weights = Vector(n, sidecar.at("h").get<double>());
  for (const auto& b : sidecar.at("blocks"))
    basis.blocks.push_back(truth::Block{b.at("name").get<std::string>(),
                                        b.at("offset").get<std::size_t>(),
                                        b.at("size").get<std::size_t>()});
  for (const auto& s : sidecar.at("spectra")) basis.spectra.push_back(vector_from_json(s));

  std::ifstream in = open_in(csv_path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("basis CSV is empty");
  basis.modes = Matrix(n, r);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("basis CSV has too few rows");
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != r) throw std::runtime_error("basis CSV row width mismatch");
    for (std::size_t a = 0; a < r; ++a) basis.modes(i, a) = parse_double(cells[a]);
  }

  const std::filesystem::path base_path =
      sidecar_path.parent_path() / sidecar.at("base_state_file").get<std::string>();
  std::ifstream base = open_in(base_path);
  if (!std::getline(base, line)) throw std::runtime_error("base state CSV is empty");
  basis.base_state.reserve(n);
  while (std::getline(base, line)) {
    if (line.empty()) continue;
    basis.base_state.push_back(parse_double(line));
  }
  if (basis.base_state.size() != n)
    throw std::runtime_error("base state CSV length mismatch");
  return basis;
}

void write_rom(const std::filesystem::path& json_path, const rom::QuadraticRom& rom) {
  const std::size_t r = rom.order();
  json j;
  j["r"] = r;
  j["mu"] = rom.mu();
  j["basis_ref"] = rom.basis_ref();
  j["e"] = vector_to_json(rom.e());
  j["L"] = matrix_to_json(rom.L());
  j["D"] = matrix_to_json(rom.D());
  json c = json::array();
  for (std::size_t i = 0; i < r; ++i) {
    json plane = json::array();
    for (std::size_t a = 0; a < r; ++a) {
      json row = json::array();
      for (std::size_t b = 0; b < r; ++b) row.push_back(rom.C()(i, a, b));
      plane.push_back(std::move(row));
    }
    c.push_back(std::move(plane));
  }
  j["C"] = std::move(c);
  dump_json(json_path, j);
}

rom::QuadraticRom read_rom(const std::filesystem::path& json_path) {
  const json j = load_json(json_path);
  const auto r = j.at("r").get<std::size_t>();
  Vector e = vector_from_json(j.at("e"));
  Matrix l = matrix_from_json(j.at("L"));
  Matrix d = matrix_from_json(j.at("D"));
  Tensor3 c(r, r, r);
  const json& ct = j.at("C");
  if (ct.size() != r) throw std::runtime_error("ROM JSON: tensor shape mismatch");
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) c(i, a, b) = ct[i][a][b].get<double>();
  return rom::QuadraticRom(std::move(e), std::move(l), std::move(d), std::move(c),
                           j.at("mu").get<double>(),
                           j.value("basis_ref", std::string{}));
}

void write_cost_trace(const std::filesystem::path& csv_path, const mes::CostTrace& trace) {
  std::ofstream out = open_out(csv_path);
  out << "k,mu_e_hat,mu_nl_hat,Q,stable\n";
  for (const mes::CostRecord& r : trace) {
    out << r.k;
    for (double v : r.mu_physical) out << ',' << format_double(v);
    out << ',' << format_double(r.q) << ',' << (r.stable ? 1 : 0) << '\n';
  }
}

mes::CostTrace read_cost_trace(const std::filesystem::path& csv_path) {
  std::ifstream in = open_in(csv_path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace CSV is empty");
  const std::size_t width = split_csv_line(line).size();
  mes::CostTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != width) throw std::runtime_error("trace CSV row width mismatch");
    mes::CostRecord rec;
    rec.k = static_cast<std::size_t>(parse_double(cells[0]));
    for (std::size_t i = 1; i + 2 < cells.size(); ++i)
      rec.mu_physical.push_back(parse_double(cells[i]));
    rec.q = parse_double(cells[cells.size() - 2]);
    rec.stable = parse_double(cells.back()) != 0.0;
    rec.blowup_time = std::numeric_limits<double>::quiet_NaN();
    trace.push_back(std::move(rec));
  }
  return trace;
}

void write_mes_config(const std::filesystem::path& json_path, const mes::MesConfig& cfg) {
  json j;
  j["a"] = vector_to_json(cfg.amplitudes);
  j["omega"] = vector_to_json(cfg.frequencies);
  j["dt"] = cfg.dt;
  j["scale"] = vector_to_json(cfg.scales);
  j["k_max"] = cfg.k_max;
  j["q_penalty"] = cfg.q_penalty;
  dump_json(json_path, j);
}

mes::MesConfig read_mes_config(const std::filesystem::path& json_path) {
  const json j = load_json(json_path);
  mes::MesConfig cfg;
  cfg.amplitudes = vector_from_json(j.at("a"));
  cfg.frequencies = vector_from_json(j.at("omega"));
  cfg.scales = vector_from_json(j.at("scale"));
  cfg.dt = j.at("dt").get<double>();
  cfg.k_max = j.at("k_max").get<std::size_t>();
  cfg.q_penalty = j.at("q_penalty").get<double>();
  return cfg;
}

}  // namespace romstab::io
