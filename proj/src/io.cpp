#include "gspi/io.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include "gspi/error.hpp"

namespace gspi {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents)
{
    static std::atomic<unsigned> counter{0};
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000) + "_"
        + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out)
            throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("rename to " + path.string() + " failed: " + ec.message());
    }
}

nlohmann::json read_json(const std::filesystem::path& path)
{
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& ex) {
        throw ParseError(path.string() + ": " + ex.what());
    }
}

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j)
{
    write_file_atomic(path, j.dump(2) + "\n");
}

std::string format_double(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

}  // namespace gspi
