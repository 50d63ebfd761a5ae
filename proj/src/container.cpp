#include "tgs/container.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace tgs {

namespace {

constexpr char kMagic[6] = {'G', 'S', 'M', 'K', '1', '\n'};
constexpr int kVersion = 1;

template <typename T>
std::vector<std::uint8_t> to_bytes(const std::vector<T>& v) {
    std::vector<std::uint8_t> out(v.size() * sizeof(T));
    if (!v.empty()) std::memcpy(out.data(), v.data(), out.size());
    return out;
}

std::size_t numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

}  // namespace

void ContainerWriter::add_f32(const std::string& name, const std::vector<std::size_t>& shape,
                              const std::vector<float>& data) {
    if (numel(shape) != data.size())
        throw std::invalid_argument("container: shape/data mismatch for " + name);
    entries_.push_back({name, "f32", shape, to_bytes(data)});
}

void ContainerWriter::add_f64(const std::string& name, const std::vector<std::size_t>& shape,
                              const std::vector<double>& data) {
    if (numel(shape) != data.size())
        throw std::invalid_argument("container: shape/data mismatch for " + name);
    entries_.push_back({name, "f64", shape, to_bytes(data)});
}

void ContainerWriter::add_u8(const std::string& name, const std::vector<std::size_t>& shape,
                             const std::vector<std::uint8_t>& data) {
    if (numel(shape) != data.size())
        throw std::invalid_argument("container: shape/data mismatch for " + name);
    entries_.push_back({name, "u8", shape, data});
}

void ContainerWriter::write(const std::string& path) const {
    nlohmann::json header;
    header["version"] = kVersion;
    header["kind"] = kind_;
    header["meta"] = meta_;
    nlohmann::json entries = nlohmann::json::array();
    std::size_t offset = 0;
    for (const Entry& e : entries_) {
        nlohmann::json j;
        j["name"] = e.name;
        j["dtype"] = e.dtype;
        j["shape"] = e.shape;
        j["offset"] = offset;
        j["nbytes"] = e.bytes.size();
        entries.push_back(std::move(j));
        offset += e.bytes.size();
    }
    header["entries"] = std::move(entries);
    const std::string header_str = header.dump();
    if (header_str.size() > 0xffffffffull)
        throw std::invalid_argument("container: header too large");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ContainerError(ContainerError::Kind::Io, "cannot write container: " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::uint32_t len = std::uint32_t(header_str.size());
    std::uint8_t len_le[4] = {std::uint8_t(len), std::uint8_t(len >> 8), std::uint8_t(len >> 16),
                              std::uint8_t(len >> 24)};
    out.write(reinterpret_cast<const char*>(len_le), 4);
    out.write(header_str.data(), std::streamsize(header_str.size()));
    for (const Entry& e : entries_)
        out.write(reinterpret_cast<const char*>(e.bytes.data()), std::streamsize(e.bytes.size()));
    if (!out) throw ContainerError(ContainerError::Kind::Io, "write failed: " + path);
}

ContainerReader::ContainerReader(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ContainerError(ContainerError::Kind::Io, "cannot open container: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());

    if (bytes.size() < sizeof(kMagic) + 4)
        throw ContainerError(ContainerError::Kind::Truncated,
                             "truncated payload: file shorter than the fixed header");
    if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw ContainerError(ContainerError::Kind::BadMagic, "bad magic: not a GSMK1 container");

    const std::uint8_t* p = bytes.data() + sizeof(kMagic);
    const std::uint32_t header_len = std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
                                     (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
    const std::size_t header_start = sizeof(kMagic) + 4;
    if (bytes.size() < header_start + header_len)
        throw ContainerError(ContainerError::Kind::Truncated,
                             "truncated payload: declared header exceeds file size");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.begin() + std::ptrdiff_t(header_start),
                                       bytes.begin() + std::ptrdiff_t(header_start + header_len));
    } catch (const nlohmann::json::exception&) {
        throw ContainerError(ContainerError::Kind::Truncated,
                             "truncated payload: header is not valid JSON");
    }
    if (!header.contains("version") || !header["version"].is_number_integer())
        throw ContainerError(ContainerError::Kind::VersionMismatch,
                             "version mismatch: missing version field");
    if (header["version"].get<int>() != kVersion)
        throw ContainerError(ContainerError::Kind::VersionMismatch,
                             "version mismatch: got version " +
                                 std::to_string(header["version"].get<int>()));

    kind_ = header.value("kind", std::string("generic"));
    meta_ = header.value("meta", nlohmann::json::object());
    payload_.assign(bytes.begin() + std::ptrdiff_t(header_start + header_len), bytes.end());

    for (const auto& j : header.value("entries", nlohmann::json::array())) {
        Entry e;
        e.dtype = j.at("dtype").get<std::string>();
        e.shape = j.at("shape").get<std::vector<std::size_t>>();
        e.offset = j.at("offset").get<std::size_t>();
        e.nbytes = j.at("nbytes").get<std::size_t>();
        const std::string name = j.at("name").get<std::string>();

        std::size_t elem = 0;
        if (e.dtype == "f32") elem = 4;
        else if (e.dtype == "f64") elem = 8;
        else if (e.dtype == "u8") elem = 1;
        else
            throw ContainerError(ContainerError::Kind::Truncated,
                                 "truncated payload: unknown dtype " + e.dtype);
        if (numel(e.shape) * elem != e.nbytes)
            throw ContainerError(ContainerError::Kind::Truncated,
                                 "truncated payload: shape of " + name +
                                     " inconsistent with byte length");
        if (e.offset + e.nbytes > payload_.size())
            throw ContainerError(ContainerError::Kind::Truncated,
                                 "truncated payload: entry " + name + " extends past EOF");
        entries_.emplace_back(name, std::move(e));
    }
}

bool ContainerReader::has(const std::string& name) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& e) { return e.first == name; });
}

std::vector<std::string> ContainerReader::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
}

const ContainerReader::Entry& ContainerReader::find(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.first == name) return e.second;
    throw ContainerError(ContainerError::Kind::Truncated,
                         "truncated payload: missing entry " + name);
}

std::vector<std::size_t> ContainerReader::shape(const std::string& name) const {
    return find(name).shape;
}

std::string ContainerReader::dtype(const std::string& name) const {
    return find(name).dtype;
}

std::vector<float> ContainerReader::read_f32(const std::string& name) const {
    const Entry& e = find(name);
    if (e.dtype != "f32") throw std::invalid_argument("container: " + name + " is not f32");
    std::vector<float> out(e.nbytes / 4);
    if (!out.empty()) std::memcpy(out.data(), payload_.data() + e.offset, e.nbytes);
    return out;
}

std::vector<double> ContainerReader::read_f64(const std::string& name) const {
    const Entry& e = find(name);
    if (e.dtype != "f64") throw std::invalid_argument("container: " + name + " is not f64");
    std::vector<double> out(e.nbytes / 8);
    if (!out.empty()) std::memcpy(out.data(), payload_.data() + e.offset, e.nbytes);
    return out;
}

std::vector<std::uint8_t> ContainerReader::read_u8(const std::string& name) const {
    const Entry& e = find(name);
    if (e.dtype != "u8") throw std::invalid_argument("container: " + name + " is not u8");
    return {payload_.begin() + std::ptrdiff_t(e.offset),
            payload_.begin() + std::ptrdiff_t(e.offset + e.nbytes)};
}

}  // namespace tgs
