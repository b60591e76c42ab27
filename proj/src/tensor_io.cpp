#include "secmpc/tensor_io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>

namespace secmpc {

namespace {
constexpr u8 kMagic[4] = {'S', 'F', 'T', '1'};
constexpr u8 kVersion = 1;

void put_u64(std::vector<u8>& out, u64 v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<u8>((v >> (8 * i)) & 0xFF));
}
} // namespace

std::vector<u8> tensor_to_bytes(const DoubleTensor& t) {
    if (t.shape.rank() > 255) throw FormatError("tensor rank exceeds format limit");
    std::vector<u8> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kVersion);
    out.push_back(static_cast<u8>(t.shape.rank()));
    for (auto d : t.shape.dims) put_u64(out, d);
    for (double v : t.data) {
        u64 bits;
        std::memcpy(&bits, &v, 8);
        put_u64(out, bits);
    }
    return out;
}

DoubleTensor tensor_from_bytes(std::span<const u8> bytes) {
    auto need = [&](std::size_t off, std::size_t count, const char* what) {
        if (off + count > bytes.size())
            throw FormatError(std::string("truncated tensor file: expected ") + what + " at byte offset " +
                              std::to_string(off) + ", file has " + std::to_string(bytes.size()) +
                              " bytes");
    };
    need(0, 4, "magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("bad magic at byte offset 0");
    need(4, 1, "version");
    if (bytes[4] != kVersion)
        throw FormatError("unsupported version " + std::to_string(bytes[4]) + " at byte offset 4");
    need(5, 1, "rank");
    unsigned rank = bytes[5];
    std::size_t off = 6;
    auto get_u64 = [&](const char* what) {
        need(off, 8, what);
        u64 v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<u64>(bytes[off + i]) << (8 * i);
        off += 8;
        return v;
    };
    Shape shape;
    for (unsigned r = 0; r < rank; ++r) shape.dims.push_back(get_u64("dim"));
    DoubleTensor t(shape);
    for (std::size_t i = 0; i < t.numel(); ++i) {
        u64 bits = get_u64("payload");
        std::memcpy(&t.data[i], &bits, 8);
    }
    if (off != bytes.size())
        throw FormatError("trailing bytes at offset " + std::to_string(off));
    return t;
}

void save_tensor(const std::string& path, const DoubleTensor& t) {
    auto bytes = tensor_to_bytes(t);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

DoubleTensor load_tensor(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open: " + path);
    std::vector<u8> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return tensor_from_bytes(bytes);
}

std::map<std::string, DoubleTensor> load_weights(const std::string& manifest_path) {
    std::ifstream is(manifest_path);
    if (!is) throw FormatError("cannot open manifest: " + manifest_path);
    std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    std::map<std::string, DoubleTensor> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError("manifest line " + std::to_string(lineno) + " is not 'name = path'");
        auto trim = [](std::string v) {
            auto b = v.find_first_not_of(" \t");
            auto e = v.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        std::string name = trim(line.substr(0, eq));
        std::string rel = trim(line.substr(eq + 1));
        out.emplace(name, load_tensor((base / rel).string()));
    }
    return out;
}

void save_weights(const std::string& manifest_path,
                  const std::map<std::string, DoubleTensor>& tensors) {
    std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    std::ofstream os(manifest_path);
    if (!os) throw FormatError("cannot open manifest for writing: " + manifest_path);
    for (const auto& [name, t] : tensors) {
        std::string file = name + ".sft";
        save_tensor((base / file).string(), t);
        os << name << " = " << file << "\n";
    }
}

} // namespace secmpc
