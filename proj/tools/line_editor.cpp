#include "line_editor.hpp"

#include <termios.h>
#include <unistd.h>

#include <iostream>

namespace thebench {

namespace {

class RawMode {
public:
    RawMode() {
        ok_ = ::tcgetattr(STDIN_FILENO, &saved_) == 0;
        if (!ok_) return;
        termios raw = saved_;
        raw.c_lflag &= ~static_cast<tcflag_t>(ICANON | ECHO);
        raw.c_cc[VMIN] = 1;
        raw.c_cc[VTIME] = 0;
        ok_ = ::tcsetattr(STDIN_FILENO, TCSAFLUSH, &raw) == 0;
    }
    ~RawMode() {
        if (ok_) ::tcsetattr(STDIN_FILENO, TCSAFLUSH, &saved_);
    }
    bool ok() const { return ok_; }

private:
    termios saved_{};
    bool ok_ = false;
};

int read_byte() {
    unsigned char c;
    return ::read(STDIN_FILENO, &c, 1) == 1 ? c : -1;
}

void redraw(const std::string& prompt, const std::string& buf, std::size_t cursor) {
    std::string s = "\r" + prompt + buf + "\x1b[K";
    if (cursor < buf.size()) s += "\x1b[" + std::to_string(buf.size() - cursor) + "D";
    (void)!::write(STDOUT_FILENO, s.data(), s.size());
}

}  // namespace

std::optional<std::string> read_line(const std::string& prompt, const std::vector<std::string>& history) {
    if (!::isatty(STDIN_FILENO)) {
        std::cout << prompt << std::flush;
        std::string line;
        if (!std::getline(std::cin, line)) return std::nullopt;
        return line;
    }
    RawMode raw;
    if (!raw.ok()) {
        std::cout << prompt << std::flush;
        std::string line;
        if (!std::getline(std::cin, line)) return std::nullopt;
        return line;
    }
    std::string buf, stash;
    std::size_t cursor = 0;
    std::size_t pos = history.size();
    redraw(prompt, buf, cursor);
    for (;;) {
        int c = read_byte();
        if (c < 0) return std::nullopt;
        if (c == '\r' || c == '\n') {
            (void)!::write(STDOUT_FILENO, "\n", 1);
            return buf;
        }
        if (c == 4 && buf.empty()) {  // ^D
            (void)!::write(STDOUT_FILENO, "\n", 1);
            return std::nullopt;
        }
        if (c == 127 || c == 8) {
            if (cursor > 0) buf.erase(--cursor, 1);
        } else if (c == 1) {
            cursor = 0;
        } else if (c == 5) {
            cursor = buf.size();
        } else if (c == 27) {
            int a = read_byte();
            int b = read_byte();
            if (a != '[') continue;
            if (b == 'A' && pos > 0) {
                if (pos == history.size()) stash = buf;
                buf = history[--pos];
                cursor = buf.size();
            } else if (b == 'B' && pos < history.size()) {
                ++pos;
                buf = pos == history.size() ? stash : history[pos];
                cursor = buf.size();
            } else if (b == 'C' && cursor < buf.size()) {
                ++cursor;
            } else if (b == 'D' && cursor > 0) {
                --cursor;
            } else if (b == 'H') {
                cursor = 0;
            } else if (b == 'F') {
                cursor = buf.size();
            }
        } else if (c >= 32) {
            buf.insert(cursor++, 1, static_cast<char>(c));
        }
        redraw(prompt, buf, cursor);
    }
}

}  // namespace thebench
