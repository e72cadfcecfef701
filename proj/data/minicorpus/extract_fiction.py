#!/usr/bin/env python3
"""Regenerate the fiction excerpts of the mini-corpus from public-domain sources.

Sources (all Project Gutenberg texts, public domain in the United States):
  * Moby-Dick; or, The Whale (Herman Melville), per-chapter files as shipped
    in the npm package @stdlib/datasets-moby-dick (data/chapter_N.txt)
  * Alice's Adventures in Wonderland (Lewis Carroll), PG eBook #11, as shipped
    in the wordcloud sdist (examples/alice.txt)
  * Botchan (Master Darling) (Natsume Soseki, tr. Yasotaro Morri), PG eBook
    #8868, as shipped in the sentencepiece sdist (test/botchan.txt)

Each excerpt starts at the first paragraph of a chapter and ends at the first
sentence boundary after MIN_WORDS whitespace-separated words.

usage: extract_fiction.py MOBY_DIR ALICE_TXT BOTCHAN_TXT OUT_DIR
"""
import pathlib
import re
import sys

MIN_WORDS = 650

MOBY_CHAPTERS = [1, 2, 3, 9, 10, 16, 19, 22, 28, 36, 41, 47, 54, 61, 64, 81, 87, 119, 133, 135]
ALICE_CHAPTERS = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "XI"]
BOTCHAN_CHAPTERS = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X"]


def paragraphs(text):
    text = text.replace("\r\n", "\n")
    paras = [" ".join(p.split()) for p in re.split(r"\n\s*\n", text)]
    return [p for p in paras if p]


def excerpt(paras):
    words = []
    for p in paras:
        words.extend(p.split())
        if len(words) >= MIN_WORDS:
            break
    if len(words) < MIN_WORDS:
        raise SystemExit("chapter too short for an excerpt")
    # trim to the first sentence end at or after MIN_WORDS
    for i in range(MIN_WORDS - 1, len(words)):
        if re.search(r"[.!?][\"')”’_]*$", words[i]):
            return " ".join(words[: i + 1])
    return " ".join(words)


def gutenberg_chapters(path, names):
    text = pathlib.Path(path).read_text(encoding="utf-8-sig")
    text = text.replace("\r\n", "\n")
    start = text.find("*** START OF")
    end = text.find("*** END OF")
    body = text[text.find("\n", start) + 1 : end if end > 0 else None]
    heads = list(re.finditer(r"^CHAPTER ([IVXL]+)\.?[^\n]*$", body, re.M))
    out = {}
    for i, h in enumerate(heads):
        stop = heads[i + 1].start() if i + 1 < len(heads) else len(body)
        out[h.group(1)] = body[h.end() : stop]
    return [(n, out[n]) for n in names]


def main(argv):
    moby_dir, alice, botchan, out_dir = argv[1:5]
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    for n in MOBY_CHAPTERS:
        text = pathlib.Path(moby_dir, f"chapter_{n}.txt").read_text(encoding="utf-8")
        paras = paragraphs(text)[1:]  # drop the "CHAPTER N. Title." line
        (out / f"moby_dick_ch{n:03d}.txt").write_text(excerpt(paras) + "\n", encoding="utf-8")

    for name, body in gutenberg_chapters(alice, ALICE_CHAPTERS):
        (out / f"alice_ch{name.lower()}.txt").write_text(excerpt(paragraphs(body)) + "\n", encoding="utf-8")

    for name, body in gutenberg_chapters(botchan, BOTCHAN_CHAPTERS):
        (out / f"botchan_ch{name.lower()}.txt").write_text(excerpt(paragraphs(body)) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main(sys.argv)
