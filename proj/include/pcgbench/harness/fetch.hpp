#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pcgbench {

/// PRECOND_BENCH_CACHE if set, else $HOME/.cache/pcgbench, else ./.pcgbench-cache.
std::filesystem::path default_cache_dir();

std::string sha256_file(const std::filesystem::path& path);
std::string sha256_bytes(const std::string& bytes);

enum class FetchStatus { cached, downloaded, network_failure, checksum_mismatch, format_error };

const char* to_string(FetchStatus s);

struct FetchResult {
    FetchStatus status = FetchStatus::network_failure;
    std::filesystem::path path;  ///< <cache>/<id>.mtx when usable
    std::string sha256;          ///< of the cached .mtx when it exists
    std::string message;

    bool ok() const { return status == FetchStatus::cached || status == FetchStatus::downloaded; }
};

struct FetchOptions {
    bool offline = false;
    std::optional<std::string> expected_sha256;  ///< checked against the cached .mtx
    long connect_timeout_s = 15;
    long total_timeout_s = 600;
};

/// Returns <cache_dir>/<id>.mtx, downloading it first unless it is already
/// cached. The payload may be a plain .mtx, gzip-compressed, or a (gzipped)
/// tar archive; from an archive the member <id>.mtx is preferred, otherwise
/// the first *.mtx member. Never throws for network or checksum problems;
/// they come back as a status.
FetchResult fetch_matrix(const std::string& id, const std::string& url,
                         const std::filesystem::path& cache_dir, const FetchOptions& opts = {});

/// gunzip (gzip or zlib framing); throws std::runtime_error on corrupt data.
std::string gunzip(const std::string& compressed);

struct TarMember {
    std::string name;
    std::string data;
};

/// Regular-file members of a ustar/GNU tar image.
std::vector<TarMember> read_tar(const std::string& image);

/// Lines "id url [sha256]"; blank lines and '#' comments skipped.
struct FetchListEntry {
    std::string id;
    std::string url;
    std::optional<std::string> sha256;
};

std::vector<FetchListEntry> read_fetch_list(const std::filesystem::path& path);

}  // namespace pcgbench
