// SPDX-License-Identifier: Apache-2.0
#include "tfatom/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace tfatom::io {

namespace {

std::runtime_error io_error(const std::filesystem::path& path, const std::string& what) {
    return std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out)
        throw io_error(path, "cannot open for writing");
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_signal(const std::filesystem::path& path, const Signal& f, const json& generator) {
    auto out = open_out(path, std::ios::binary);
    for (index_t l = 0; l < f.length(); ++l) {
        const double re = f.samples[l].real(), im = f.samples[l].imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(double));
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
    if (!out)
        throw io_error(path, "write failed");
    out.close();

    json sidecar;
    sidecar["length"] = f.length();
    if (f.sample_rate)
        sidecar["sample_rate"] = *f.sample_rate;
    else
        sidecar["sample_rate"] = nullptr;
    sidecar["generator"] = generator;
    auto meta_path = path;
    meta_path += ".json";
    auto meta = open_out(meta_path, std::ios::out);
    meta << sidecar.dump(2) << "\n";
    if (!meta)
        throw io_error(meta_path, "write failed");
}

Signal read_raw_signal(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in)
        throw io_error(path, "cannot open");
    const auto bytes = static_cast<std::uint64_t>(in.tellg());
    if (bytes % (2 * sizeof(double)) != 0)
        throw io_error(path, "size is not a multiple of 16 bytes (re,im float64 pairs)");
    const auto count = static_cast<index_t>(bytes / (2 * sizeof(double)));
    if (count < 1)
        throw io_error(path, "empty signal");
    in.seekg(0);

    Signal f;
    f.samples.resize(count);
    std::vector<double> raw(static_cast<std::size_t>(count) * 2);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
    if (!in)
        throw io_error(path, "short read");
    for (index_t l = 0; l < count; ++l)
        f.samples[l] = cplx{raw[2 * static_cast<std::size_t>(l)],
                            raw[2 * static_cast<std::size_t>(l) + 1]};

    auto meta_path = path;
    meta_path += ".json";
    std::ifstream meta(meta_path);
    if (meta) {
        try {
            json sidecar = json::parse(meta);
            if (sidecar.contains("sample_rate") && sidecar["sample_rate"].is_number())
                f.sample_rate = sidecar["sample_rate"].get<double>();
        } catch (const json::exception&) {
            // sidecar is advisory; a broken one doesn't invalidate the samples
        }
    }
    return f;
}

namespace {

struct ChunkHeader {
    char id[4];
    std::uint32_t size;
};

bool read_chunk_header(std::ifstream& in, ChunkHeader& h) {
    in.read(h.id, 4);
    in.read(reinterpret_cast<char*>(&h.size), 4);
    return static_cast<bool>(in);
}

} // namespace

Signal read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error(path, "cannot open");

    char riff[4], wave[4];
    std::uint32_t riff_size = 0;
    in.read(riff, 4);
    in.read(reinterpret_cast<char*>(&riff_size), 4);
    in.read(wave, 4);
    if (!in || std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0)
        throw io_error(path, "not a RIFF/WAVE file");

    std::uint16_t format = 0, n_channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    std::vector<char> data;

    ChunkHeader h{};
    while (read_chunk_header(in, h)) {
        if (std::memcmp(h.id, "fmt ", 4) == 0) {
            std::vector<char> fmt(h.size);
            in.read(fmt.data(), h.size);
            if (!in || h.size < 16)
                throw io_error(path, "truncated fmt chunk");
            std::memcpy(&format, fmt.data() + 0, 2);
            std::memcpy(&n_channels, fmt.data() + 2, 2);
            std::memcpy(&rate, fmt.data() + 4, 4);
            std::memcpy(&bits, fmt.data() + 14, 2);
            have_fmt = true;
        } else if (std::memcmp(h.id, "data", 4) == 0) {
            data.resize(h.size);
            in.read(data.data(), h.size);
            if (!in)
                throw io_error(path, "truncated data chunk");
        } else {
            in.seekg(h.size, std::ios::cur);
        }
        if (h.size % 2 == 1)
            in.seekg(1, std::ios::cur); // chunks are word-aligned
    }

    if (!have_fmt)
        throw io_error(path, "missing fmt chunk");
    if (format != 1)
        throw io_error(path, "only PCM WAV is supported");
    if (n_channels != 1)
        throw io_error(path, "only mono WAV is supported");
    if (bits != 16)
        throw io_error(path, "only 16-bit WAV is supported");
    if (data.size() < 2)
        throw io_error(path, "empty data chunk");

    const auto count = static_cast<index_t>(data.size() / 2);
    Signal f;
    f.samples.resize(count);
    for (index_t l = 0; l < count; ++l) {
        std::int16_t s;
        std::memcpy(&s, data.data() + 2 * static_cast<std::size_t>(l), 2);
        f.samples[l] = cplx{static_cast<double>(s) / 32768.0, 0.0};
    }
    f.sample_rate = static_cast<double>(rate);
    return f;
}

Signal read_signal(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".wav")
        return read_wav(path);
    // sniff the magic so .wav renamed to .bin still works
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error(path, "cannot open");
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    if (in && std::memcmp(magic, "RIFF", 4) == 0)
        return read_wav(path);
    return read_raw_signal(path);
}

void write_solution(const std::filesystem::path& path, const SolutionFile& sol) {
    json doc;
    doc["format"] = "tfatom-solution";
    doc["version"] = 1;
    doc["method"] = sol.method;
    doc["signal"] = sol.signal_meta;
    doc["frame"] = sol.frame_meta;
    doc["solver"] = sol.solver_meta;
    json atoms = json::array();
    for (const auto& atom : sol.tf.atoms) {
        json a;
        a["n"] = atom.shift;
        a["omega"] = atom.omega;
        a["re"] = atom.coefficient.real();
        a["im"] = atom.coefficient.imag();
        atoms.push_back(std::move(a));
    }
    doc["atoms"] = std::move(atoms);

    auto out = open_out(path, std::ios::out);
    out << doc.dump(2) << "\n";
    if (!out)
        throw io_error(path, "write failed");
}

SolutionFile read_solution(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw io_error(path, "cannot open");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw io_error(path, std::string("malformed JSON: ") + e.what());
    }

    SolutionFile sol;
    try {
        if (doc.at("format").get<std::string>() != "tfatom-solution")
            throw io_error(path, "not a solution file");
        sol.method = doc.at("method").get<std::string>();
        sol.signal_meta = doc.value("signal", json::object());
        sol.frame_meta = doc.at("frame");
        sol.solver_meta = doc.value("solver", json::object());
        sol.tf.hop = sol.frame_meta.at("hop").get<index_t>();
        sol.tf.channels = sol.frame_meta.at("channels").get<index_t>();
        sol.tf.signal_length = sol.frame_meta.at("signal_length").get<index_t>();
        for (const auto& a : doc.at("atoms")) {
            SparseAtom atom;
            atom.shift = a.at("n").get<index_t>();
            atom.omega = a.at("omega").get<double>();
            atom.coefficient = cplx{a.at("re").get<double>(), a.at("im").get<double>()};
            sol.tf.atoms.push_back(atom);
        }
    } catch (const json::exception& e) {
        throw io_error(path, std::string("missing or mistyped field: ") + e.what());
    }
    return sol;
}

void write_pgm(const std::filesystem::path& path, const Eigen::MatrixXd& img_db,
               double db_floor) {
    if (!(db_floor < 0.0))
        throw std::invalid_argument("db_floor must be negative");
    auto out = open_out(path, std::ios::binary);
    out << "P5\n" << img_db.cols() << " " << img_db.rows() << "\n255\n";
    // bottom row of the image is frequency 0
    for (index_t r = img_db.rows() - 1; r >= 0; --r) {
        for (index_t c = 0; c < img_db.cols(); ++c) {
            const double v = std::clamp(img_db(r, c), db_floor, 0.0);
            const double scaled = 255.0 * (v - db_floor) / (-db_floor);
            const auto byte = static_cast<unsigned char>(std::lround(scaled));
            out.put(static_cast<char>(byte));
        }
    }
    if (!out)
        throw io_error(path, "write failed");
}

void write_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    auto out = open_out(path, std::ios::out | std::ios::binary); // binary: keep LF
    for (index_t r = 0; r < m.rows(); ++r) {
        for (index_t c = 0; c < m.cols(); ++c) {
            if (c)
                out << ",";
            out << format_double(m(r, c));
        }
        out << "\n";
    }
    if (!out)
        throw io_error(path, "write failed");
}

void write_curves_csv(const std::filesystem::path& path,
                      const std::vector<std::string>& names,
                      const std::vector<Eigen::VectorXd>& curves) {
    if (names.size() != curves.size())
        throw std::invalid_argument("one name per curve required");
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out << "index";
    for (const auto& name : names)
        out << "," << name;
    out << "\n";
    index_t rows = 0;
    for (const auto& c : curves)
        rows = std::max(rows, c.size());
    for (index_t r = 0; r < rows; ++r) {
        out << r;
        for (const auto& c : curves)
            out << "," << format_double(r < c.size() ? c[r] : 0.0);
        out << "\n";
    }
    if (!out)
        throw io_error(path, "write failed");
}

} // namespace tfatom::io
