#include "isar/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts need byte swaps");

namespace isar {

namespace {

template <typename T>
void put(std::string& buf, T v) {
    char raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    buf.append(raw, sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& off, const char* what) {
    if (off + sizeof(T) > buf.size()) throw DataError(std::string("truncated ") + what);
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw DataError("write failed for " + path);
}

constexpr std::uint32_t kDimLimit = 1u << 20;

}  // namespace

void save_matrix(const ComplexMatrix& m, const std::string& path) {
    std::string buf;
    buf.reserve(16 + m.data.size() * 16);
    buf.append("CISR", 4);
    put<std::uint32_t>(buf, 1);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(m.rows));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(m.cols));
    for (const auto& v : m.data) {
        put<double>(buf, v.real());
        put<double>(buf, v.imag());
    }
    write_file(path, buf);
}

ComplexMatrix load_matrix(const std::string& path) {
    const std::string buf = read_file(path);
    if (buf.size() < 4 || buf.compare(0, 4, "CISR") != 0) throw DataError("bad magic in " + path);
    std::size_t off = 4;
    const auto version = take<std::uint32_t>(buf, off, "header");
    if (version != 1) throw DataError("unsupported CISR version");
    const auto rows = take<std::uint32_t>(buf, off, "header");
    const auto cols = take<std::uint32_t>(buf, off, "header");
    if (rows > kDimLimit || cols > kDimLimit) throw DataError("dimension overflow in " + path);
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data) {
        const double re = take<double>(buf, off, "payload");
        const double im = take<double>(buf, off, "payload");
        v = cplx{re, im};
    }
    return m;
}

void save_mask(const Mask& mask, const std::string& path) {
    std::string buf;
    buf.append("IMSK", 4);
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(mask.rows));
    put<std::uint32_t>(buf, static_cast<std::uint32_t>(mask.cols));
    put<std::uint8_t>(buf, static_cast<std::uint8_t>(mask.kind));
    put<double>(buf, mask.requested_ratio);
    put<std::uint64_t>(buf, mask.seed);
    for (auto b : mask.observed) buf.push_back(static_cast<char>(b ? 1 : 0));
    write_file(path, buf);
}

Mask load_mask(const std::string& path) {
    const std::string buf = read_file(path);
    if (buf.size() < 4 || buf.compare(0, 4, "IMSK") != 0) throw DataError("bad magic in " + path);
    std::size_t off = 4;
    Mask mask;
    mask.rows = take<std::uint32_t>(buf, off, "header");
    mask.cols = take<std::uint32_t>(buf, off, "header");
    if (mask.rows > kDimLimit || mask.cols > kDimLimit) throw DataError("dimension overflow in " + path);
    const auto kind = take<std::uint8_t>(buf, off, "header");
    if (kind > 2) throw DataError("bad mask kind in " + path);
    mask.kind = static_cast<MaskKind>(kind);
    mask.requested_ratio = take<double>(buf, off, "header");
    mask.seed = take<std::uint64_t>(buf, off, "header");
    const std::size_t n = mask.rows * mask.cols;
    if (off + n > buf.size()) throw DataError("truncated payload in " + path);
    mask.observed.resize(n);
    for (std::size_t i = 0; i < n; ++i) mask.observed[i] = buf[off + i] ? 1 : 0;
    return mask;
}

std::string render_pgm(const RealMatrix& db_image, double top_db) {
    std::ostringstream os;
    os << "P5\n" << db_image.cols << ' ' << db_image.rows << "\n255\n";
    std::string body;
    body.reserve(db_image.size());
    for (double db : db_image.data) {
        const double v = 255.0 * (db + top_db) / top_db;
        const double r = std::round(v);  // round half away from zero
        const int px = static_cast<int>(std::clamp(r, 0.0, 255.0));
        body.push_back(static_cast<char>(static_cast<unsigned char>(px)));
    }
    return os.str() + body;
}

void save_pgm(const RealMatrix& db_image, double top_db, const std::string& path) {
    write_file(path, render_pgm(db_image, top_db));
}

Scene parse_scene(const std::string& text) {
    Scene scene;
    std::size_t rows = 0, cols = 0;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        line.erase(0, start);

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError("scene line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "rows") rows = std::stoul(val);
            else if (key == "cols") cols = std::stoul(val);
            else if (key == "f0") scene.params.f0 = std::stod(val);
            else if (key == "delta_f") scene.params.delta_f = std::stod(val);
            else if (key == "delta_theta") scene.params.delta_theta = std::stod(val);
            else if (key == "c") scene.params.c = std::stod(val);
            else if (key == "scatterer") {
                std::istringstream fields(val);
                std::string f;
                std::vector<double> nums;
                while (std::getline(fields, f, ',')) nums.push_back(std::stod(f));
                if (nums.size() != 4)
                    throw DataError("scene line " + std::to_string(lineno) + ": scatterer=p,q,re,im");
                Scatterer s;
                s.p = static_cast<std::size_t>(nums[0]);
                s.q = static_cast<std::size_t>(nums[1]);
                s.alpha = cplx{nums[2], nums[3]};
                scene.scatterers.push_back(s);
            } else {
                throw DataError("scene line " + std::to_string(lineno) + ": unknown key " + key);
            }
        } catch (const std::invalid_argument&) {
            throw DataError("scene line " + std::to_string(lineno) + ": bad number");
        }
    }
    if (rows == 0 || cols == 0) throw DataError("scene: rows and cols are required");
    scene.params.n_angle = rows;
    scene.params.n_freq = cols;
    scene.validate();
    return scene;
}

Scene load_scene(const std::string& path) {
    return parse_scene(read_file(path));
}

}  // namespace isar
