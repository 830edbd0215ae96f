#include "pcgbench/harness/fetch.hpp"

#include <curl/curl.h>
#include <openssl/evp.h>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "pcgbench/errors.hpp"

namespace pcgbench {

namespace fs = std::filesystem;

fs::path default_cache_dir()
{
    if (const char* env = std::getenv("PRECOND_BENCH_CACHE"); env != nullptr && *env != '\0') {
        return env;
    }
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
        return fs::path(home) / ".cache" / "pcgbench";
    }
    return ".pcgbench-cache";
}

const char* to_string(FetchStatus s)
{
    switch (s) {
    case FetchStatus::cached:
        return "cached";
    case FetchStatus::downloaded:
        return "downloaded";
    case FetchStatus::network_failure:
        return "network_failure";
    case FetchStatus::checksum_mismatch:
        return "checksum_mismatch";
    case FetchStatus::format_error:
        return "format_error";
    }
    return "unknown";
}

namespace {

std::string hex(const unsigned char* d, unsigned len)
{
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(digits[d[i] >> 4]);
        out.push_back(digits[d[i] & 0xf]);
    }
    return out;
}

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new())
    {
        if (ctx_ == nullptr || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("sha256 init failed");
        }
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const char* data, std::size_t len) { EVP_DigestUpdate(ctx_, data, len); }

    std::string finish()
    {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned len = 0;
        EVP_DigestFinal_ex(ctx_, md.data(), &len);
        return hex(md.data(), len);
    }

private:
    EVP_MD_CTX* ctx_;
};

void write_file_atomic(const fs::path& p, const std::string& data)
{
    const fs::path tmp = p.string() + ".part";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) {
            throw std::runtime_error("short write to " + tmp.string());
        }
    }
    fs::rename(tmp, p);
}

std::size_t curl_sink(char* ptr, std::size_t size, std::size_t nmemb, void* user)
{
    static_cast<std::string*>(user)->append(ptr, size * nmemb);
    return size * nmemb;
}

void curl_global_once()
{
    static std::once_flag flag;
    std::call_once(flag, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
}

bool download(const std::string& url, const FetchOptions& opts, std::string& body,
              std::string& error)
{
    curl_global_once();
    CURL* h = curl_easy_init();
    if (h == nullptr) {
        error = "curl_easy_init failed";
        return false;
    }
    std::array<char, CURL_ERROR_SIZE> errbuf{};
    curl_easy_setopt(h, CURLOPT_URL, url.c_str());
    curl_easy_setopt(h, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(h, CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(h, CURLOPT_CONNECTTIMEOUT, opts.connect_timeout_s);
    curl_easy_setopt(h, CURLOPT_TIMEOUT, opts.total_timeout_s);
    curl_easy_setopt(h, CURLOPT_NOSIGNAL, 1L);
    curl_easy_setopt(h, CURLOPT_WRITEFUNCTION, curl_sink);
    curl_easy_setopt(h, CURLOPT_WRITEDATA, &body);
    curl_easy_setopt(h, CURLOPT_ERRORBUFFER, errbuf.data());
    const CURLcode rc = curl_easy_perform(h);
    curl_easy_cleanup(h);
    if (rc != CURLE_OK) {
        error = errbuf[0] != '\0' ? errbuf.data() : curl_easy_strerror(rc);
        return false;
    }
    return true;
}

bool is_gzip(const std::string& s)
{
    return s.size() >= 2 && static_cast<unsigned char>(s[0]) == 0x1f &&
           static_cast<unsigned char>(s[1]) == 0x8b;
}

bool is_tar(const std::string& s)
{
    return s.size() >= 512 && s.compare(257, 5, "ustar") == 0;
}

std::string basename_of(const std::string& name)
{
    const auto slash = name.find_last_of('/');
    return slash == std::string::npos ? name : name.substr(slash + 1);
}

bool ends_with(const std::string& s, const std::string& suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string sha256_bytes(const std::string& bytes)
{
    Sha256 h;
    h.update(bytes.data(), bytes.size());
    return h.finish();
}

std::string sha256_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    Sha256 h;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.finish();
}

std::string gunzip(const std::string& compressed)
{
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 32) != Z_OK) {
        throw std::runtime_error("inflateInit2 failed");
    }
    std::string out;
    std::array<char, 1 << 16> buf{};
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = reinterpret_cast<Bytef*>(buf.data());
        zs.avail_out = static_cast<uInt>(buf.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw std::runtime_error("corrupt gzip stream");
        }
        out.append(buf.data(), buf.size() - zs.avail_out);
        if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
            inflateEnd(&zs);
            throw std::runtime_error("truncated gzip stream");
        }
    }
    inflateEnd(&zs);
    return out;
}

std::vector<TarMember> read_tar(const std::string& image)
{
    std::vector<TarMember> out;
    std::size_t pos = 0;
    std::string long_name;
    while (pos + 512 <= image.size()) {
        const char* h = image.data() + pos;
        if (std::all_of(h, h + 512, [](char c) { return c == '\0'; })) {
            break;
        }
        auto field = [&](std::size_t off, std::size_t len) {
            std::string s(h + off, len);
            return s.substr(0, s.find('\0'));
        };
        std::string name = field(0, 100);
        const std::string prefix = field(345, 155);
        if (!prefix.empty() && field(257, 5) == "ustar") {
            name = prefix + "/" + name;
        }
        const std::string size_field = field(124, 12);
        std::size_t size = 0;
        try {
            size = static_cast<std::size_t>(std::stoull(size_field.empty() ? "0" : size_field, nullptr, 8));
        } catch (const std::exception&) {
            throw ParseError("bad tar size field");
        }
        const char type = h[156];
        pos += 512;
        if (pos + size > image.size()) {
            throw ParseError("truncated tar member " + name);
        }
        std::string data = image.substr(pos, size);
        pos += (size + 511) / 512 * 512;
        if (type == 'L') {  // GNU long name for the next member
            long_name = data.substr(0, data.find('\0'));
            continue;
        }
        if (!long_name.empty()) {
            name = long_name;
            long_name.clear();
        }
        if (type == '0' || type == '\0') {
            out.push_back({std::move(name), std::move(data)});
        }
    }
    return out;
}

FetchResult fetch_matrix(const std::string& id, const std::string& url, const fs::path& cache_dir,
                         const FetchOptions& opts)
{
    FetchResult res;
    res.path = cache_dir / (id + ".mtx");
    auto verify = [&](FetchStatus ok_status) {
        res.sha256 = sha256_file(res.path);
        if (opts.expected_sha256 && *opts.expected_sha256 != res.sha256) {
            res.status = FetchStatus::checksum_mismatch;
            res.message = "expected " + *opts.expected_sha256 + ", found " + res.sha256;
        } else {
            res.status = ok_status;
        }
        return res;
    };

    std::error_code ec;
    if (fs::exists(res.path, ec)) {
        return verify(FetchStatus::cached);
    }
    if (opts.offline) {
        res.status = FetchStatus::network_failure;
        res.message = "offline and not cached: " + res.path.string();
        return res;
    }
    std::string body;
    std::string error;
    if (!download(url, opts, body, error)) {
        res.status = FetchStatus::network_failure;
        res.message = error;
        return res;
    }
    std::string payload;
    try {
        payload = is_gzip(body) ? gunzip(body) : std::move(body);
        if (is_tar(payload)) {
            const auto members = read_tar(payload);
            const TarMember* pick = nullptr;
            for (const auto& m : members) {
                if (basename_of(m.name) == id + ".mtx") {
                    pick = &m;
                    break;
                }
            }
            for (const auto& m : members) {
                if (pick == nullptr && ends_with(m.name, ".mtx")) {
                    pick = &m;
                }
            }
            if (pick == nullptr) {
                res.status = FetchStatus::format_error;
                res.message = "archive has no .mtx member";
                return res;
            }
            payload = pick->data;
        }
    } catch (const std::exception& e) {
        res.status = FetchStatus::format_error;
        res.message = e.what();
        return res;
    }
    if (payload.rfind("%%MatrixMarket", 0) != 0) {
        res.status = FetchStatus::format_error;
        res.message = "payload is not Matrix Market";
        return res;
    }
    fs::create_directories(cache_dir, ec);
    write_file_atomic(res.path, payload);
    return verify(FetchStatus::downloaded);
}

std::vector<FetchListEntry> read_fetch_list(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open fetch list " + path.string());
    }
    std::vector<FetchListEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ss(line);
        FetchListEntry e;
        if (!(ss >> e.id)) {
            continue;
        }
        if (!(ss >> e.url)) {
            throw ParseError("fetch list entry '" + e.id + "' has no url");
        }
        std::string sum;
        if (ss >> sum) {
            e.sha256 = sum;
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace pcgbench
