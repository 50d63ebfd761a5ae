#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgs/error.hpp"

namespace tgs {

// GSMK1 binary container: magic "GSMK1\n", a 4-byte little-endian header
// length, a JSON header, then the concatenated little-endian payloads
// (row-major). Entries carry name, dtype (f32/f64/u8), shape and byte extent;
// free-form metadata lives under header["meta"]. Round trips are bit-exact.
class ContainerWriter {
public:
    void set_kind(const std::string& kind) { kind_ = kind; }
    void set_meta(nlohmann::json meta) { meta_ = std::move(meta); }

    void add_f32(const std::string& name, const std::vector<std::size_t>& shape,
                 const std::vector<float>& data);
    void add_f64(const std::string& name, const std::vector<std::size_t>& shape,
                 const std::vector<double>& data);
    void add_u8(const std::string& name, const std::vector<std::size_t>& shape,
                const std::vector<std::uint8_t>& data);

    void write(const std::string& path) const;

private:
    struct Entry {
        std::string name;
        std::string dtype;
        std::vector<std::size_t> shape;
        std::vector<std::uint8_t> bytes;
    };
    std::string kind_ = "generic";
    nlohmann::json meta_ = nlohmann::json::object();
    std::vector<Entry> entries_;
};

class ContainerReader {
public:
    explicit ContainerReader(const std::string& path);

    const std::string& kind() const { return kind_; }
    const nlohmann::json& meta() const { return meta_; }

    bool has(const std::string& name) const;
    std::vector<std::string> names() const;
    std::vector<std::size_t> shape(const std::string& name) const;
    std::string dtype(const std::string& name) const;

    std::vector<float> read_f32(const std::string& name) const;
    std::vector<double> read_f64(const std::string& name) const;
    std::vector<std::uint8_t> read_u8(const std::string& name) const;

private:
    struct Entry {
        std::string dtype;
        std::vector<std::size_t> shape;
        std::size_t offset = 0;
        std::size_t nbytes = 0;
    };
    const Entry& find(const std::string& name) const;

    std::string kind_;
    nlohmann::json meta_;
    std::vector<std::pair<std::string, Entry>> entries_;
    std::vector<std::uint8_t> payload_;
};

}  // namespace tgs
