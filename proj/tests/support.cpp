#include "support.hpp"

#include "errors.hpp"

#include <atomic>

namespace aida::test {

std::filesystem::path repo_root() {
    return std::filesystem::path(AIDA_REPO_ROOT);
}

std::filesystem::path sample_corpus_manifest() {
    return repo_root() / "data" / "corpus" / "fan_ejector" / "manifest.json";
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("aida_test_" + tag + "_" + std::to_string(counter.fetch_add(1)) + "_" +
             std::to_string(static_cast<unsigned>(::getpid())));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

WarningCapture::WarningCapture() {
    set_warn_handler([this](const std::string& message) { messages_.push_back(message); });
}

WarningCapture::~WarningCapture() {
    set_warn_handler({});
}

SequenceBackend::SequenceBackend(std::vector<std::string> replies)
    : replies_(std::move(replies)) {}

CompletionResponse SequenceBackend::complete(const CompletionRequest& request) {
    request.validate();
    require(next_ < replies_.size(), Errc::precondition,
            "scripted sequence exhausted after " + std::to_string(next_) + " calls");
    CompletionResponse response;
    response.content = replies_[next_++];
    return response;
}

CompletionResponse CapturingBackend::complete(const CompletionRequest& request) {
    requests_.push_back(request);
    return inner_.complete(request);
}

Corpus mini_corpus() {
    Corpus corpus;
    corpus.target_domain = "household fan";
    corpus.source_domain = "ejector";
    TechnicalDocument fan;
    fan.doc_id = "fan-1";
    fan.role = DomainRole::target;
    fan.domain_name = corpus.target_domain;
    fan.title = "Desk fan overview";
    fan.body = "A desk fan moves room air with rotating blades behind a wire guard, driven by a "
               "small electric motor plugged into a wall outlet.";
    TechnicalDocument ejector;
    ejector.doc_id = "ej-1";
    ejector.role = DomainRole::source;
    ejector.domain_name = corpus.source_domain;
    ejector.title = "Ejector basics";
    ejector.body = "An ejector moves external fluid by accelerating a driving fluid through a "
                   "nozzle, lowering pressure in the body so surrounding fluid is drawn in and "
                   "expelled through a diffuser.";
    corpus.documents = {fan, ejector};
    return corpus;
}

}  // namespace aida::test
