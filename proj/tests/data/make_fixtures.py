#!/usr/bin/env python3
# Copyright 2026 The Taxolink Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the JSON Lines fixtures next to this script.

Writes docs.jsonl (link input and evaluation set), annotations.jsonl
(gold-replay labels) and vectors.jsonl (replay embeddings for every text
the pipeline asks for under any strategy).
"""

import csv
import hashlib
import json
import os
import random
import re

HERE = os.path.dirname(os.path.abspath(__file__))
DIM = 16
SPECIALS = {"[CLS]", "[SEP]"}

# (id, kind, title, sentences as token lists, entities, gold)
# An entity is (kind, sentence, start, end, label).
DOCS = [
    ("d1", "occupation", "Java Developer",
     "We are hiring a software developer. Strong Java and SQL skills are "
     "required. A Bachelor of Science is preferred.",
     [("occupation", 0, 4, 6, "o1"), ("skill", 1, 1, 2, "s1"),
      ("skill", 1, 3, 4, "s4"), ("qualification", 2, 1, 4, "EQF6")],
     ["o1"]),
    ("d2", "skill", "Staff Nurse",
     "Our hospital seeks a registered nurse. Patient care and teamwork are "
     "essential.",
     [("occupation", 0, 4, 6, "o3"), ("skill", 1, 0, 2, "s3"),
      ("skill", 1, 3, 4, "s6")],
     ["s3", "s6"]),
    ("d3", "occupation", "Data Scientist",
     "Join us as a data scientist! Python and SQL skills are needed. A "
     "driving license helps.",
     [("occupation", 0, 4, 6, "o2"), ("skill", 1, 0, 1, "s2"),
      ("skill", 1, 2, 3, "s4")],
     ["o2"]),
    ("d4", "qualification", "Truck Driver",
     "Wanted: truck driver with a driving license. An Upper secondary "
     "certificate is required.",
     [("occupation", 0, 2, 4, "o4"), ("qualification", 0, 6, 8, "UNK"),
      ("qualification", 1, 1, 4, "EQF4")],
     ["EQF4", "UNK"]),
    ("d5", "skill", "Analyst",
     "Experience with Python and SQL.",
     [("skill", 0, 2, 3, "s2"), ("skill", 0, 4, 5, "s4")],
     ["s2", "s4"]),
    ("d6", "occupation", "Wizard",
     "Seeking a wizard.",
     [("occupation", 0, 2, 3, "UNK")],
     ["UNK"]),
]

# Documents whose annotation starts each sentence with a [CLS] token.
WITH_CLS = {"d2"}

TOKEN = re.compile(r"[.,;:!?()\[\]{}'\"/&]|[^\s.,;:!?()\[\]{}'\"/&]+")


def sentences(text):
  parts = re.split(r"(?<=[.!?])\s+", text.strip())
  return [TOKEN.findall(p) for p in parts if p]


def word_vector(word):
  seed = int(hashlib.sha256(word.encode()).hexdigest()[:16], 16)
  rng = random.Random(seed)
  return [rng.uniform(-1.0, 1.0) for _ in range(DIM)]


def embed(text):
  words = re.findall(r"[a-z0-9]+", text.lower()) or [text.strip()]
  v = [0.0] * DIM
  for w in words:
    for i, x in enumerate(word_vector(w)):
      v[i] += x
  return [round(x, 6) for x in v]


def split_alt(cell):
  out = []
  for part in cell.split("\n"):
    part = part.strip()
    if part and part not in out:
      out.append(part)
  return out


def node_texts(path, label_col="preferredLabel"):
  texts = []
  with open(path, newline="") as f:
    for row in csv.DictReader(f):
      label = row[label_col]
      desc = row.get("description", "") or ""
      alts = split_alt(row.get("altLabels", "") or "")
      texts.append(label)
      if desc.strip():
        texts.append(desc)
        texts.append(label + ". " + desc)
      if alts:
        texts.append("\n".join(alts))
        texts.extend(alts)
  return texts


def main():
  texts = []
  texts += node_texts(os.path.join(HERE, "occupations.csv"))
  texts += node_texts(os.path.join(HERE, "skills.csv"))
  texts += node_texts(os.path.join(HERE, "eqf.csv"), "qualification")

  docs, annotations = [], []
  for doc_id, kind, title, text, entities, gold in DOCS:
    sents = sentences(text)
    if doc_id in WITH_CLS:
      sents = [["[CLS]"] + s for s in sents]
      entities = [(k, s, a + 1, b + 1, l) for k, s, a, b, l in entities]
    # Character offsets, aligned left to right like the gold labeler.
    spans, cursor = [], 0
    for s in sents:
      row = []
      for tok in s:
        if tok in SPECIALS:
          row.append((cursor, cursor))
          continue
        pos = text.index(tok, cursor)
        row.append((pos, pos + len(tok)))
        cursor = pos + len(tok)
      spans.append(row)
    offsets = [0]
    for s in sents:
      offsets.append(offsets[-1] + len(s))
    labels = [["O"] * len(s) for s in sents]
    gold_spans = []
    for ekind, s, a, b, label in entities:
      name = ekind.capitalize()
      labels[s][a] = "B-" + name
      for t in range(a + 1, b):
        labels[s][t] = "I-" + name
      texts.append(text[spans[s][a][0]:spans[s][b - 1][1]])
      if ekind == kind:
        gold_spans.append({
            "tokens": list(range(offsets[s] + a, offsets[s] + b)),
            "label": label,
        })
    annotations.append({
        "id": doc_id, "tokens": sents, "labels": labels,
        "entities": [{"kind": k, "sentence": s, "start": a, "end": b,
                      "gold_id": l} for k, s, a, b, l in entities],
    })
    docs.append({"id": doc_id, "kind": kind, "title": title, "text": text,
                 "gold": gold, "gold_spans": gold_spans})
    texts += [text, title]

  with open(os.path.join(HERE, "docs.jsonl"), "w") as f:
    for d in docs:
      f.write(json.dumps(d) + "\n")
  with open(os.path.join(HERE, "annotations.jsonl"), "w") as f:
    for a in annotations:
      f.write(json.dumps(a) + "\n")
  seen = set()
  with open(os.path.join(HERE, "vectors.jsonl"), "w") as f:
    for t in texts:
      if t in seen:
        continue
      seen.add(t)
      f.write(json.dumps({"text": t, "vector": embed(t)}) + "\n")


if __name__ == "__main__":
  main()
