from dataclasses import dataclass, fields


def node(cls):
    """Frozen dataclass whose hash is computed once; these get hashed a lot."""
    cls = dataclass(frozen=True)(cls)
    names = tuple(f.name for f in fields(cls) if f.compare)
    tag = cls.__name__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((tag,) + tuple(getattr(self, n) for n in names))
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__
    return cls
