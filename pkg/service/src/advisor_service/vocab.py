"""Whitespace-token vocabulary with the four structural specials."""

PAD, UNK, BOS, EOS = "<pad>", "<unk>", "<bos>", "<eos>"
SPECIALS = (PAD, UNK, BOS, EOS)


class Vocab:
    def __init__(self, tokens):
        self.itos = list(SPECIALS) + [t for t in tokens if t not in SPECIALS]
        self.stoi = {t: i for i, t in enumerate(self.itos)}

    def __len__(self):
        return len(self.itos)

    @property
    def pad_id(self):
        return self.stoi[PAD]

    @property
    def bos_id(self):
        return self.stoi[BOS]

    @property
    def eos_id(self):
        return self.stoi[EOS]

    def encode(self, text):
        unk = self.stoi[UNK]
        return [self.stoi.get(t, unk) for t in text.split()]

    def decode(self, ids):
        skip = {self.stoi[s] for s in SPECIALS}
        return " ".join(self.itos[i] for i in ids if i not in skip)

    @classmethod
    def build(cls, texts):
        seen = {}
        for text in texts:
            for tok in text.split():
                seen.setdefault(tok, None)
        return cls(seen.keys())

    def to_list(self):
        return list(self.itos)

    @classmethod
    def from_list(cls, itos):
        v = cls.__new__(cls)
        v.itos = list(itos)
        v.stoi = {t: i for i, t in enumerate(v.itos)}
        return v
