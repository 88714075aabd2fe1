#include "ddgeo/io.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace ddgeo::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& token, std::size_t line) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (!token.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || token.empty()) {
        fail(ErrorCode::Parse, "line " + std::to_string(line) + ": '" + token + "' is not a number");
    }
    return value;
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path staging_path(const fs::path& dir) {
    std::random_device rd;
    const fs::path parent = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
    return parent / (dir.filename().string() + ".tmp-" + std::to_string(rd()));
}

// Writes into a sibling staging directory and swaps it into place.
template <typename Fill>
void write_directory(const fs::path& dir, Fill&& fill) {
    const fs::path stage = staging_path(dir);
    std::error_code ec;
    try {
        fs::create_directories(stage);
        fill(stage);
        if (fs::exists(dir)) fs::remove_all(dir);
        fs::rename(stage, dir);
    } catch (const fs::filesystem_error& e) {
        fs::remove_all(stage, ec);
        fail(ErrorCode::Io, e.what());
    } catch (...) {
        fs::remove_all(stage, ec);
        throw;
    }
}

}  // namespace

Mat parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            row.push_back(parse_number(trim(rest.substr(0, comma)), line_no));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected " +
                                       std::to_string(rows.front().size()) + " columns, found " +
                                       std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
    Mat out(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    require_finite(out, "CSV matrix");
    return out;
}

std::string format_csv(const Mat& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out += ',';
            out += format_number(m(i, j));
        }
        out += '\n';
    }
    return out;
}

Mat read_csv(const fs::path& path) {
    try {
        return parse_csv(read_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse) fail(ErrorCode::Parse, path.string() + ": " + e.what());
        throw;
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

void write_csv(const fs::path& path, const Mat& m) { write_text(path, format_csv(m)); }

json matrix_to_json(const Mat& m) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Mat matrix_from_json(const json& j) {
    try {
        const auto rows = j.at("rows").get<Eigen::Index>();
        const auto cols = j.at("cols").get<Eigen::Index>();
        const auto data = j.at("data").get<std::vector<double>>();
        if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
            fail(ErrorCode::Parse, "matrix JSON: data length does not equal rows*cols");
        }
        Mat out(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index k = 0; k < cols; ++k) out(i, k) = data[static_cast<std::size_t>(i * cols + k)];
        }
        require_finite(out, "JSON matrix");
        return out;
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, std::string("matrix JSON: ") + e.what());
    }
}

json subspace_to_json(const Subspace& s) {
    const json basis = matrix_to_json(s.basis());
    return {{"ambient_dim", s.ambient_dim()}, {"dim", s.dim()}, {"basis", basis.at("data")}};
}

json zeros_to_json(const std::vector<std::complex<double>>& zeros) {
    json out = json::array();
    for (const auto& z : zeros) out.push_back({{"re", z.real()}, {"im", z.imag()}});
    return out;
}

void save_experiment(const fs::path& dir, const ExperimentData& data) {
    write_directory(dir, [&](const fs::path& stage) {
        write_csv(stage / "X.csv", data.X());
        write_csv(stage / "X0.csv", data.X0());
        write_csv(stage / "Y.csv", data.Y());
        write_csv(stage / "U.csv", data.U());
        const json manifest = {{"n", data.n()},         {"m", data.m()},           {"p", data.p()},
                               {"T", data.horizon()},   {"N", data.experiments()}, {"seed", data.seed()}};
        write_text(stage / "manifest.json", manifest.dump(2) + "\n");
    });
}

ExperimentData load_experiment(const fs::path& dir, const Tolerances& tol) {
    if (!fs::is_directory(dir)) fail(ErrorCode::Io, "data directory " + dir.string() + " does not exist");
    json manifest;
    try {
        manifest = json::parse(read_file(dir / "manifest.json"));
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, "manifest.json: " + std::string(e.what()));
    }
    static const std::set<std::string> known{"n", "m", "p", "T", "N", "seed"};
    if (!manifest.is_object()) fail(ErrorCode::Parse, "manifest.json must be an object");
    for (const auto& [key, value] : manifest.items()) {
        if (!known.contains(key)) fail(ErrorCode::Parse, "manifest.json: unknown field '" + key + "'");
    }
    try {
        const auto n = manifest.at("n").get<Eigen::Index>();
        const auto m = manifest.at("m").get<Eigen::Index>();
        const auto p = manifest.at("p").get<Eigen::Index>();
        const auto horizon = manifest.at("T").get<Eigen::Index>();
        const auto count = manifest.at("N").get<Eigen::Index>();
        ExperimentData data(n, m, p, horizon, read_csv(dir / "X.csv"), read_csv(dir / "X0.csv"),
                            read_csv(dir / "Y.csv"), read_csv(dir / "U.csv"), tol);
        if (data.experiments() != count) fail(ErrorCode::Parse, "manifest N does not match the data matrices");
        data.set_seed(manifest.value("seed", std::uint64_t{0}));
        return data;
    } catch (const json::exception& e) {
        fail(ErrorCode::Parse, "manifest.json: " + std::string(e.what()));
    }
}

LtiSystem load_system(const fs::path& dir) {
    if (!fs::is_directory(dir)) fail(ErrorCode::Io, "system directory " + dir.string() + " does not exist");
    return {read_csv(dir / "A.csv"), read_csv(dir / "B.csv"), read_csv(dir / "C.csv")};
}

void save_system(const fs::path& dir, const LtiSystem& sys) {
    write_directory(dir, [&](const fs::path& stage) {
        write_csv(stage / "A.csv", sys.A());
        write_csv(stage / "B.csv", sys.B());
        write_csv(stage / "C.csv", sys.C());
    });
}

}  // namespace ddgeo::io
