#include "painscale/stopwords.hpp"

#include <cctype>
#include <fstream>

#include "painscale/error.hpp"

namespace painscale::features {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Portuguese stop-lemma defaults (function words and common auxiliaries).
constexpr const char* kPortugueseDefaults[] = {
    "a", "à", "ao", "aos", "aquela", "aquelas", "aquele", "aqueles", "aquilo", "as", "às",
    "até", "com", "como", "da", "das", "de", "dela", "delas", "dele", "deles", "depois",
    "do", "dos", "e", "é", "ela", "elas", "ele", "eles", "em", "entre", "era", "eram",
    "essa", "essas", "esse", "esses", "esta", "está", "estamos", "estão", "estar", "estas",
    "estava", "estavam", "este", "esteja", "estejam", "estejamos", "estes", "esteve",
    "estive", "estivemos", "estiver", "estivera", "estiveram", "estiverem", "estivermos",
    "estivesse", "estivessem", "estivéssemos", "estou", "eu", "foi", "fomos", "for", "fora",
    "foram", "forem", "formos", "fosse", "fossem", "fôssemos", "fui", "há", "haja", "hajam",
    "hajamos", "hão", "havemos", "haver", "hei", "houve", "houvemos", "houver", "houvera",
    "houverá", "houveram", "houverão", "houverei", "houverem", "houveremos", "houveria",
    "houveriam", "houveríamos", "houvermos", "houvesse", "houvessem", "houvéssemos", "isso",
    "isto", "já", "lhe", "lhes", "mais", "mas", "me", "mesmo", "meu", "meus", "minha",
    "minhas", "muito", "na", "não", "nas", "nem", "no", "nos", "nós", "nossa", "nossas",
    "nosso", "nossos", "num", "numa", "o", "os", "ou", "para", "pela", "pelas", "pelo",
    "pelos", "por", "qual", "quando", "que", "quem", "são", "se", "seja", "sejam",
    "sejamos", "sem", "ser", "será", "serão", "serei", "seremos", "seria", "seriam",
    "seríamos", "seu", "seus", "só", "somos", "sou", "sua", "suas", "também", "te", "tem",
    "tém", "temos", "tenha", "tenham", "tenhamos", "tenho", "terá", "terão", "terei",
    "teremos", "teria", "teriam", "teríamos", "teu", "teus", "teve", "tinha", "tinham",
    "tínhamos", "tive", "tivemos", "tiver", "tivera", "tiveram", "tiverem", "tivermos",
    "tivesse", "tivessem", "tivéssemos", "tu", "tua", "tuas", "um", "uma", "você", "vocês",
    "vos", "ter"};

}  // namespace

StopwordSet StopwordSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read stopword file: " + path.string());
  std::set<std::string> lemmas;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (!line.empty()) lemmas.insert(ascii_lower(line));
  }
  return StopwordSet(std::move(lemmas));
}

const StopwordSet& StopwordSet::default_portuguese() {
  static const StopwordSet set = [] {
    std::set<std::string> lemmas;
    for (const char* w : kPortugueseDefaults) lemmas.insert(w);
    return StopwordSet(std::move(lemmas));
  }();
  return set;
}

bool StopwordSet::contains(std::string_view lemma) const {
  return lemmas_.count(ascii_lower(lemma)) > 0;
}

}  // namespace painscale::features
