// Copyright 2026 The Taxolink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "taxolink/line_channel.h"

#include <csignal>
#include <cerrno>
#include <cstring>
#include <mutex>

#include <netdb.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "taxolink/errors.h"

namespace taxolink {
namespace {

std::string ErrnoText() { return std::strerror(errno); }

// Line framing over a pair of file descriptors.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd, std::string peer)
      : read_fd_(read_fd), write_fd_(write_fd), peer_(std::move(peer)) {}

  std::string RoundTrip(std::string_view line) override {
    if (line.find('\n') != std::string_view::npos) {
      throw ProviderError("request line contains a newline");
    }
    std::string out(line);
    out.push_back('\n');
    WriteAll(out);
    return ReadLine();
  }

 protected:
  void CloseFds() {
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
    read_fd_ = write_fd_ = -1;
  }

 private:
  void WriteAll(const std::string &data) {
    size_t done = 0;
    while (done < data.size()) {
      ssize_t n = ::write(write_fd_, data.data() + done, data.size() - done);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProviderError(peer_ + ": write failed: " + ErrnoText());
      }
      done += static_cast<size_t>(n);
    }
  }

  std::string ReadLine() {
    for (;;) {
      size_t nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      char chunk[65536];
      ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw ProviderError(peer_ + ": read failed: " + ErrnoText());
      }
      if (n == 0) throw ProviderError(peer_ + ": connection closed");
      buffer_.append(chunk, static_cast<size_t>(n));
    }
  }

  int read_fd_;
  int write_fd_;
  std::string peer_;
  std::string buffer_;
};

class SocketChannel : public FdChannel {
 public:
  SocketChannel(int fd, std::string peer) : FdChannel(fd, fd, std::move(peer)) {}
  ~SocketChannel() override { CloseFds(); }
};

class ProcessChannel : public FdChannel {
 public:
  ProcessChannel(int read_fd, int write_fd, pid_t pid, std::string peer)
      : FdChannel(read_fd, write_fd, std::move(peer)), pid_(pid) {}
  ~ProcessChannel() override {
    CloseFds();
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }

 private:
  pid_t pid_;
};

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

std::unique_ptr<LineChannel> ConnectTcp(std::string_view hostport) {
  size_t colon = hostport.rfind(':');
  if (colon == std::string_view::npos || colon == 0 ||
      colon + 1 == hostport.size()) {
    throw ProviderError("bad service address '" + std::string(hostport) +
                        "', expected HOST:PORT");
  }
  std::string host(hostport.substr(0, colon));
  std::string port(hostport.substr(colon + 1));
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo *res = nullptr;
  int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res);
  if (rc != 0) {
    throw ProviderError("cannot resolve " + std::string(hostport) + ": " +
                        ::gai_strerror(rc));
  }
  int fd = -1;
  std::string last_error = "no addresses";
  for (addrinfo *ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_error = ErrnoText();
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    last_error = ErrnoText();
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw ProviderError("cannot connect to " + std::string(hostport) + ": " +
                        last_error);
  }
  IgnoreSigpipe();
  return std::make_unique<SocketChannel>(fd, std::string(hostport));
}

std::unique_ptr<LineChannel> SpawnProcess(std::string_view command) {
  if (command.empty()) throw ProviderError("stdio: address without command");
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw ProviderError("pipe: " + ErrnoText());
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw ProviderError("pipe: " + ErrnoText());
  }
  std::string cmd(command);
  pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
      ::close(fd);
    }
    throw ProviderError("fork: " + ErrnoText());
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) {
      ::close(fd);
    }
    ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char *>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  IgnoreSigpipe();
  return std::make_unique<ProcessChannel>(from_child[0], to_child[1], pid,
                                          "stdio:" + cmd);
}

}  // namespace

std::unique_ptr<LineChannel> OpenLineChannel(std::string_view address) {
  if (address.starts_with("stdio:")) {
    return SpawnProcess(address.substr(6));
  }
  if (address.starts_with("tcp://")) address.remove_prefix(6);
  return ConnectTcp(address);
}

}  // namespace taxolink
