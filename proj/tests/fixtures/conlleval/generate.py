"""Regenerates the conlleval parity fixture.

Oracle: the `conlleval` package 0.2 from PyPI, a line-by-line port of the
CoNLL-2000 conlleval.pl chunk counting. Each pair is scored as its own
conlleval run; the final line scores all pairs as one corpus (sentences
separated by blank lines). Precision/recall use conlleval.pl's conventions
(0 when the denominator is 0). Every pair has at least one gold chunk.

    pip install conlleval==0.2
    python3 generate.py    # rewrites pairs.txt and expected.tsv
"""
import random

from conlleval import evaluate

LABELS = ["Time", "Loc", "Price"]


def random_tags(rng, n):
    tags = []
    for _ in range(n):
        r = rng.random()
        if r < 0.35:
            tags.append("O")
        elif r < 0.65:
            tags.append("B-" + rng.choice(LABELS))
        else:
            tags.append("I-" + rng.choice(LABELS))
    return tags


def perturb(rng, gold):
    pred = list(gold)
    for i in range(len(pred)):
        if rng.random() < 0.3:
            pred[i] = random_tags(rng, 1)[0]
    return pred


def has_chunk(tags):
    return any(t != "O" for t in tags)


def counts(pairs):
    lines = []
    for gold, pred in pairs:
        for g, p in zip(gold, pred):
            lines.append(f"w {g} {p}")
        lines.append("")
    chunks = evaluate(lines)["overall"]["chunks"]["stats"]
    return chunks["gold"], chunks["pred"], chunks["correct"]


def line(name, gold, pred, correct):
    p = correct / pred if pred else 0.0
    r = correct / gold if gold else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return f"{name}\t{gold}\t{pred}\t{correct}\t{p:.4f}\t{r:.4f}\t{f:.4f}\n"


def main():
    rng = random.Random(20230710)
    # Hand-picked edge cases first: orphan I, adjacent B, type switches.
    pairs = [
        (["B-Time", "I-Time", "O"], ["B-Time", "I-Time", "O"]),
        (["B-Time", "I-Time", "O"], ["B-Time", "O", "O"]),
        (["I-Time", "I-Time", "O"], ["B-Time", "I-Time", "O"]),
        (["B-Time", "B-Time"], ["B-Time", "I-Time"]),
        (["B-Time", "I-Loc", "I-Loc"], ["B-Time", "B-Loc", "I-Loc"]),
        (["O", "I-Price", "B-Price", "I-Price"], ["O", "B-Price", "B-Price", "I-Price"]),
        (["B-Loc", "O", "B-Loc"], ["O", "O", "O"]),
        (["B-Loc", "I-Time", "O"], ["B-Loc", "B-Time", "O"]),
    ]
    while len(pairs) < 64:
        n = rng.randint(1, 12)
        gold = random_tags(rng, n)
        if not has_chunk(gold):
            continue
        pred = perturb(rng, gold) if rng.random() < 0.8 else random_tags(rng, n)
        pairs.append((gold, pred))

    with open("pairs.txt", "w") as f:
        for gold, pred in pairs:
            f.write("gold " + " ".join(gold) + "\n")
            f.write("pred " + " ".join(pred) + "\n\n")
    with open("expected.tsv", "w") as f:
        for i, pair in enumerate(pairs):
            f.write(line(str(i), *counts([pair])))
        f.write(line("overall", *counts(pairs)))


if __name__ == "__main__":
    main()
