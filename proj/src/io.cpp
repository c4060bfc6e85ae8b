#include "sqgfront/io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace sqg {

static_assert(std::endian::native == std::endian::little,
              "field dumps assume a little-endian host");

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

void write_field(const Field& f, double time, const std::filesystem::path& base) {
  std::filesystem::path bin = base;
  bin += ".f64";
  std::ofstream out(bin, std::ios::binary);
  if (!out) throw std::runtime_error("write_field: cannot open " + bin.string());
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));

  nlohmann::json side;
  side["L"] = f.grid().half_length;
  side["N"] = f.grid().num_points;
  side["time"] = time;
  std::filesystem::path sj = base;
  sj += ".json";
  write_json(side, sj);
}

Field read_field(const std::filesystem::path& base, double* time) {
  std::filesystem::path sj = base;
  sj += ".json";
  std::ifstream meta(sj);
  if (!meta) throw std::runtime_error("read_field: cannot open " + sj.string());
  nlohmann::json side = nlohmann::json::parse(meta);
  GridSpec g = make_grid(side.at("L").get<double>(), side.at("N").get<int>());
  if (time) *time = side.value("time", 0.0);

  std::filesystem::path bin = base;
  bin += ".f64";
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw std::runtime_error("read_field: cannot open " + bin.string());
  std::vector<double> vals(g.num_points);
  in.read(reinterpret_cast<char*>(vals.data()),
          static_cast<std::streamsize>(vals.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_field: truncated " + bin.string());
  return Field(g, std::move(vals));
}

namespace {
std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}
}  // namespace

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open " + path.string());
  out << "x,value\n";
  for (int j = 0; j < f.size(); ++j)
    out << fmt(f.grid().point(j)) << ',' << fmt(f.values()[j]) << '\n';
}

void write_quadrature_csv(const QuadratureScheme& q,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_quadrature_csv: cannot open " +
                                     path.string());
  out << "y,w\n";
  for (int i = 0; i < q.node_count(); ++i)
    out << fmt(q.nodes[i]) << ',' << fmt(q.weights[i]) << '\n';
}

void write_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                      const nlohmann::json& meta) {
  std::filesystem::create_directories(dir);

  std::ofstream mon(dir / "monitors.csv");
  mon << "t,mass,Hs,Y,X,rhs_norm\n";
  for (const auto& m : traj.monitors)
    mon << fmt(m.t) << ',' << fmt(m.mass) << ',' << fmt(m.hs) << ','
        << fmt(m.y) << ',' << fmt(m.x) << ',' << fmt(m.rhs_norm) << '\n';

  nlohmann::json manifest = meta;
  manifest["blew_up"] = traj.blew_up;
  if (traj.blew_up) manifest["blowup_time"] = traj.blowup_time;
  nlohmann::json times = nlohmann::json::array();
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    std::ostringstream name;
    name << "snapshot_" << std::setw(6) << std::setfill('0') << i;
    write_field(traj.snapshots[i].second, traj.snapshots[i].first,
                dir / name.str());
    times.push_back(traj.snapshots[i].first);
    files.push_back(name.str());
  }
  manifest["times"] = times;
  manifest["files"] = files;
  write_json(manifest, dir / "manifest.json");
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_json: cannot open " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace sqg
