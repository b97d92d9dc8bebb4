"""Regenerates fixtures/toy: a 100-document topical corpus with queries,
judgments and a small thesaurus. Output is deterministic."""

import random
import shutil
from pathlib import Path

ROOT = Path(__file__).parent / "toy"

TOPICS = {
    "oil": ["سعر", "النفط", "برميل", "أوبك", "إنتاج", "أسعار", "الخام", "صادرات"],
    "economy": ["نظام", "رأسمالي", "بنوك", "أزمة", "حكومة", "سوق", "ديون", "فائدة"],
    "health": ["hospital", "patient", "doctor", "disease", "treatment", "nurse", "clinic", "vaccine"],
    "sports": ["match", "team", "goal", "player", "league", "coach", "stadium", "season"],
    "astronomy": ["planet", "star", "telescope", "orbit", "galaxy", "comet", "moon", "eclipse"],
    "nutrition": ["diet", "protein", "vitamin", "calorie", "fiber", "meal", "sugar", "fruit"],
    "law": ["court", "judge", "lawyer", "verdict", "trial", "contract", "appeal", "witness"],
    "family": ["parent", "child", "marriage", "sibling", "household", "grandparent", "wedding", "cousin"],
    "science": ["experiment", "laboratory", "molecule", "theory", "physics", "chemistry", "research", "data"],
    "tales": ["king", "dragon", "castle", "forest", "princess", "wizard", "journey", "legend"],
}

FILLER = ("the of and a to in is was for on that with as by at from this it be are an "
          "year people time new first said also many more other some report week").split()
AR_FILLER = "في من على إلى عن مع هذا التي الذي كان قال بين بعد".split()

# query text, topic; several queries use words the corpus rarely contains
QUERIES = [
    ("1", "سعر النفط", "oil"),
    ("2", "نظام رأسمالي", "economy"),
    ("3", "hospital physician", "health"),
    ("4", "team victory", "sports"),
    ("5", "planet telescope", "astronomy"),
    ("6", "diet nourishment", "nutrition"),
    ("7", "court ruling", "law"),
    ("8", "family household", "family"),
    ("9", "laboratory experiment", "science"),
    ("10", "dragon legend", "tales"),
]

THESAURUS = """# id\tpos\tmembers
s-price\tnoun\tسعر,ثمن,تكلفة,قيمة مالية
s-calorie\tnoun\tسعر,سعرة
s-oil\tnoun\tالنفط,الخام
s-system\tnoun\tنظام,منظومة,خطة
s-phys\tnoun\tphysician,doctor,medic
s-hosp\tnoun\thospital,clinic,infirmary
s-win\tnoun\tvictory,win,goal
s-team\tnoun\tteam,squad,side
s-tele\tnoun\ttelescope,scope
s-nour\tnoun\tnourishment,diet,meal,nutriment
s-rule\tnoun\truling,verdict,decision
s-court\tnoun\tcourt,tribunal,palace
s-house\tnoun\thousehold,family,home
s-exp\tnoun\texperiment,trial,test
s-lab\tnoun\tlaboratory,lab
s-legend\tnoun\tlegend,myth,caption
s-dragon\tnoun\tdragon,wyvern
"""

DIACRITICS = ["َ", "ُ", "ِ", "ْ"]


def doc_text(rng, topic, strength):
    words = TOPICS[topic]
    arabic = topic in ("oil", "economy")
    filler = AR_FILLER if arabic else FILLER
    n = rng.randint(40, 80)
    out = []
    for _ in range(n):
        r = rng.random()
        if r < strength:
            w = rng.choice(words[: 3 + rng.randint(0, 5)])
        elif r < strength + 0.2:
            w = rng.choice(TOPICS[rng.choice(list(TOPICS))])
        else:
            w = rng.choice(filler)
        if arabic and "\u0600" <= w[0] <= "\u06ff" and rng.random() < 0.2:
            w = w[0] + rng.choice(DIACRITICS) + w[1:]
        out.append(w)
    if not arabic:
        out[0] = out[0].capitalize()
    return " ".join(out) + ".\n"


def main():
    rng = random.Random(20240611)
    if ROOT.exists():
        shutil.rmtree(ROOT)
    corpus = ROOT / "corpus"
    qrels = []
    for topic in TOPICS:
        (corpus / topic).mkdir(parents=True)
        for i in range(10):
            strength = rng.choice([0.06, 0.15, 0.3])
            (corpus / topic / f"{topic}{i:02d}.txt").write_text(doc_text(rng, topic, strength), encoding="utf-8")
            qrels.append((topic, f"{topic}/{topic}{i:02d}", 1 if strength >= 0.15 else 0))
    qids = {t: q for q, _, t in QUERIES}
    with open(ROOT / "qrels.txt", "w", encoding="utf-8") as f:
        for topic, doc, rel in qrels:
            f.write(f"{qids[topic]} 0 {doc} {rel}\n")
    with open(ROOT / "queries.tsv", "w", encoding="utf-8") as f:
        for q, text, _ in QUERIES:
            f.write(f"{q}\t{text}\n")
    (ROOT / "thesaurus.tsv").write_text(THESAURUS, encoding="utf-8")
    (ROOT / "experiment.toml").write_text(
        'corpus = "corpus"\nqueries = "queries.tsv"\nqrels = "qrels.txt"\n'
        'thesaurus = "thesaurus.tsv"\nk_retrieve = 1000\nk_levels = [5, 10, 20, 100]\n\n'
        "[analyzer]\nlowercase = true\nstrip_diacritics = true\nnormalize_alef_ya = true\n"
        'stopwords = "stopwords.txt"\n\n[prf]\nd = 15\nt = 7\n',
        encoding="utf-8",
    )
    (ROOT / "stopwords.txt").write_text("\n".join(FILLER[:20] + AR_FILLER) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
