"""Functional-style utilities."""

__all__ = ['ordered_unique']


def ordered_unique(it):
    """Remove duplicates, keeping the first occurrence of each item.

    Example:
        >>> ordered_unique(['S2', 'S1', 'S2', 'S3'])
        ('S2', 'S1', 'S3')
    """
    seen = set()
    return tuple(x for x in it if not (x in seen or seen.add(x)))
