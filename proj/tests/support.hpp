#pragma once

#include "backend.hpp"
#include "corpus.hpp"
#include "util.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace aida::test {

std::filesystem::path repo_root();
std::filesystem::path sample_corpus_manifest();

/// Fresh directory under the build temp area, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Captures aida::warn output for the lifetime of the object.
class WarningCapture {
public:
    WarningCapture();
    ~WarningCapture();
    const std::vector<std::string>& messages() const { return messages_; }

private:
    std::vector<std::string> messages_;
};

/// Replies with canned responses in order; throws once exhausted.
class SequenceBackend : public Backend {
public:
    explicit SequenceBackend(std::vector<std::string> replies);
    CompletionResponse complete(const CompletionRequest& request) override;
    std::size_t calls() const { return next_; }

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
};

/// Forwards to an inner backend while keeping every request for inspection.
class CapturingBackend : public Backend {
public:
    explicit CapturingBackend(Backend& inner) : inner_(inner) {}
    CompletionResponse complete(const CompletionRequest& request) override;
    const std::vector<CompletionRequest>& requests() const { return requests_; }

private:
    Backend& inner_;
    std::vector<CompletionRequest> requests_;
};

/// Tiny two-document in-memory corpus for dialogue tests.
Corpus mini_corpus();

}  // namespace aida::test
