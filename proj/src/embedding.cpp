#include "relex/embedding.h"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "relex/errors.h"

namespace relex {

std::vector<std::pair<int, int>> relative_distances(const SentenceInstance& sentence) {
  std::vector<std::pair<int, int>> out;
  out.reserve(sentence.token_ids.size());
  for (int i = 0; i < sentence.length(); ++i)
    out.emplace_back(i - sentence.head_pos, i - sentence.tail_pos);
  return out;
}

int clip_distance(int d, int max_distance) {
  if (d < -max_distance) d = -max_distance;
  if (d > max_distance) d = max_distance;
  return d + max_distance;
}

Matrix embed_sentence(const SentenceInstance& sentence, const Matrix& word_table,
                      const PositionEmbeddingTable& positions) {
  const int k = sentence.length();
  const int d_w = word_table.cols;
  const int d_p = positions.head.cols;
  const int max_dist = positions.max_distance();
  Matrix out(k, d_w + 2 * d_p);
  for (int i = 0; i < k; ++i) {
    int token = sentence.token_ids[static_cast<std::size_t>(i)];
    if (token < 0 || token >= word_table.rows)
      throw std::runtime_error("token id out of range: " + std::to_string(token));
    double* dst = out.row(i);
    const double* w = word_table.row(token);
    for (int c = 0; c < d_w; ++c) dst[c] = w[c];
    const double* ph = positions.head.row(clip_distance(i - sentence.head_pos, max_dist));
    for (int c = 0; c < d_p; ++c) dst[d_w + c] = ph[c];
    const double* pt = positions.tail.row(clip_distance(i - sentence.tail_pos, max_dist));
    for (int c = 0; c < d_p; ++c) dst[d_w + d_p + c] = pt[c];
  }
  return out;
}

Matrix load_embeddings_text(const std::string& path, const Vocabulary& vocabulary, int word_dim,
                            Rng& rng) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings: " + path);

  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty embeddings file: " + path);
  std::istringstream hs(header);
  long long file_rows = 0;
  int file_dim = 0;
  if (!(hs >> file_rows >> file_dim) || file_rows < 0 || file_dim <= 0)
    throw std::runtime_error(path + ": malformed embeddings header");
  if (file_dim != word_dim)
    throw ConfigError("embeddings dimension " + std::to_string(file_dim) +
                      " does not match word_dim " + std::to_string(word_dim));

  std::unordered_map<std::string, std::vector<double>> file_vectors;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    std::vector<double> vec(static_cast<std::size_t>(word_dim));
    for (int c = 0; c < word_dim; ++c) {
      if (!(ls >> vec[static_cast<std::size_t>(c)]))
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": truncated embedding row");
    }
    file_vectors[word] = std::move(vec);
  }

  Matrix table(vocabulary.size(), word_dim);
  for (int id = 0; id < vocabulary.size(); ++id) {
    auto it = file_vectors.find(vocabulary.word(id));
    double* dst = table.row(id);
    if (it != file_vectors.end()) {
      for (int c = 0; c < word_dim; ++c) dst[c] = it->second[static_cast<std::size_t>(c)];
    } else {
      for (int c = 0; c < word_dim; ++c) dst[c] = rng.uniform(-0.25, 0.25);
    }
  }
  return table;
}

}  // namespace relex
