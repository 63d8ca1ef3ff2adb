#include "alticon/ocr.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "alticon/image_io.hpp"
#include "alticon/util.hpp"

namespace alticon {
namespace {

// sh -c <command> with data on stdin; returns captured stdout.
std::string run_command(const std::string& command, std::span<const std::uint8_t> input) {
    int in_pipe[2];
    int out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
        throw Error(Error::Kind::Io, "ocr subprocess: pipe() failed");
    }
    const pid_t pid = fork();
    if (pid < 0) {
        throw Error(Error::Kind::Io, "ocr subprocess: fork() failed");
    }
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);

    std::size_t written = 0;
    while (written < input.size()) {
        const ssize_t n = write(in_pipe[1], input.data() + written, input.size() - written);
        if (n <= 0) break;
        written += static_cast<std::size_t>(n);
    }
    close(in_pipe[1]);

    std::string output;
    char buf[4096];
    ssize_t n;
    while ((n = read(out_pipe[0], buf, sizeof(buf))) > 0) {
        output.append(buf, static_cast<std::size_t>(n));
    }
    close(out_pipe[0]);

    int status = 0;
    waitpid(pid, &status, 0);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        throw Error(Error::Kind::Io, "ocr subprocess exited with status " +
                                         std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1));
    }
    return output;
}

}  // namespace

std::vector<OcrLine> parse_ocr_response(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Error::Kind::Parse, std::string("ocr response is not valid JSON: ") + e.what());
    }
    if (!doc.is_array()) {
        throw Error(Error::Kind::Parse, "ocr response must be a JSON array");
    }
    std::vector<OcrLine> lines;
    for (const auto& item : doc) {
        OcrLine line;
        line.text = item.value("text", std::string{});
        line.confidence = item.value("confidence", 0.0);
        lines.push_back(std::move(line));
    }
    return lines;
}

SubprocessOcrEngine::SubprocessOcrEngine(std::string command) : command_(std::move(command)) {}

std::vector<OcrLine> SubprocessOcrEngine::recognize(std::span<const std::uint8_t> png_bytes) {
    return parse_ocr_response(run_command(command_, png_bytes));
}

HttpOcrEngine::HttpOcrEngine(std::string url) : url_(std::move(url)) {}

std::vector<OcrLine> HttpOcrEngine::recognize(std::span<const std::uint8_t> png_bytes) {
    const std::size_t path_pos = url_.find('/', url_.find("://") + 3);
    const std::string host = path_pos == std::string::npos ? url_ : url_.substr(0, path_pos);
    const std::string path = path_pos == std::string::npos ? "/" : url_.substr(path_pos);
    httplib::Client client(host);
    client.set_read_timeout(30, 0);
    auto res = client.Post(path, reinterpret_cast<const char*>(png_bytes.data()),
                           png_bytes.size(), "image/png");
    if (!res || res->status != 200) {
        throw Error(Error::Kind::Backend,
                    "ocr endpoint error: " + (res ? std::to_string(res->status) : "no response"));
    }
    return parse_ocr_response(res->body);
}

std::vector<std::string> ocr_in_icon_text(const Image& icon, OcrEngine* engine,
                                          double min_confidence, DiagnosticSink* diags) {
    if (engine == nullptr) {
        diag(diags, "ocr", "no OCR engine configured; continuing without in-icon text");
        return {};
    }
    std::vector<OcrLine> lines;
    try {
        const std::vector<std::uint8_t> png = encode_png(icon);
        lines = engine->recognize(png);
    } catch (const Error& e) {
        diag(diags, "ocr", std::string("OCR engine unavailable: ") + e.what());
        return {};
    }

    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const OcrLine& line : lines) {
        if (line.confidence < min_confidence) continue;
        const std::string text = trim(line.text);
        if (text.empty()) continue;
        if (!seen.insert(to_lower(text)).second) continue;
        out.push_back(text);
    }
    return out;
}

}  // namespace alticon
