#include "lpsieve/io.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <cstdio>
#include <string>
#include <vector>

namespace lpsieve {

namespace {

struct Token {
  std::string_view text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    std::size_t const start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back(Token{line.substr(start, i - start), start + 1});
  }
  return out;
}

struct Line {
  std::size_t number;
  std::string_view text;  // comment stripped
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!tokenize(line).empty()) out.push_back(Line{number, line});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

RatVec parse_row(Line const& line, std::vector<Token> const& tokens,
                 std::size_t n, std::string_view what) {
  if (tokens.size() != n) {
    std::size_t const column =
        tokens.size() > n ? tokens[n].column : line.text.size() + 1;
    throw ParseError(line.number, column,
                     std::string(what) + " needs " + std::to_string(n) +
                         " entries, found " + std::to_string(tokens.size()));
  }
  RatVec row;
  row.reserve(n);
  for (auto const& tok : tokens) {
    auto value = parse_rational(tok.text);
    if (!value) {
      throw ParseError(line.number, tok.column,
                       "malformed rational '" + std::string(tok.text) + "'");
    }
    row.push_back(std::move(*value));
  }
  return row;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  auto const lines = content_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty instance");

  auto const head = tokenize(lines[0].text);
  if (head.size() != 1) {
    throw ParseError(lines[0].number, head.size() > 1 ? head[1].column : 1,
                     "first line must hold only the dimension");
  }
  std::size_t n = 0;
  for (char ch : head[0].text) {
    if (!std::isdigit(static_cast<unsigned char>(ch)) || n > 100000) {
      throw ParseError(lines[0].number, head[0].column,
                       "dimension must be a positive integer");
    }
    n = n * 10 + static_cast<std::size_t>(ch - '0');
  }
  if (n == 0) {
    throw ParseError(lines[0].number, head[0].column, "dimension must be positive");
  }

  std::vector<RatVec> columns;
  std::optional<RatVec> target;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    Line const& line = lines[i];
    auto tokens = tokenize(line.text);
    if (tokens.front().text.starts_with("t:")) {
      if (target) throw ParseError(line.number, tokens.front().column, "duplicate target");
      if (columns.size() != n) {
        throw ParseError(line.number, tokens.front().column,
                         "target must follow all " + std::to_string(n) + " basis columns");
      }
      Token& first = tokens.front();
      if (first.text.size() == 2) {
        tokens.erase(tokens.begin());
      } else {
        first.text.remove_prefix(2);
        first.column += 2;
      }
      target = parse_row(line, tokens, n, "target");
      continue;
    }
    if (columns.size() == n || target) {
      throw ParseError(line.number, tokens.front().column, "unexpected extra line");
    }
    columns.push_back(parse_row(line, tokens, n, "basis column"));
  }
  if (columns.size() != n) {
    std::size_t const last = lines.back().number;
    throw ParseError(last + 1, 1,
                     "expected " + std::to_string(n) + " basis columns, found " +
                         std::to_string(columns.size()));
  }
  return Instance{Basis(std::move(columns)), std::move(target)};
}

std::string format_rational(Scalar const& x) {
  Scalar y(x);
  y.canonicalize();
  return y.get_str();
}

std::string emit_instance(Basis const& basis, std::optional<RatVec> const& target) {
  std::string out = std::to_string(basis.dim()) + "\n";
  auto row = [&](RatVec const& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ' ';
      out += format_rational(v[i]);
    }
    out += '\n';
  };
  for (auto const& c : basis.columns()) row(c);
  if (target) {
    out += "t: ";
    row(*target);
  }
  return out;
}

std::string git_blob_hash(std::string_view content) {
  std::string const header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  bool const ok = ctx != nullptr && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &length) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("SHA-1 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace lpsieve
