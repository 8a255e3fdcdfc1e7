"""Json serialization utilities."""
from enum import Enum

from celery.utils.imports import symbol_by_name

__all__ = ['JsonEncoder', 'dumps', 'loads']

_JSON_EXTRA_ARGS = {
    'simplejson': {'use_decimal': False, 'namedtuple_as_object': False},
}


def get_best_json(attr=None,
                  choices=['simplejson', 'json']):
    for i, module in enumerate(choices):
        try:
            sym = ':'.join([module, attr]) if attr else module
            return symbol_by_name(sym), _JSON_EXTRA_ARGS.get(module, {})
        except (AttributeError, ImportError):
            if i + 1 >= len(choices):
                raise


json, _json_args = get_best_json()


class JsonEncoder(get_best_json('JSONEncoder')[0]):
    """Json encoder understanding model values.

    Notes:
        Sets are written as sorted lists so that reports are
        byte-identical between runs, and objects providing a
        ``__json__`` method are encoded by whatever it returns.
    """

    def default(self, o,
                sets=(set, frozenset),
                isinstance=isinstance):
        if isinstance(o, sets):
            return sorted(o, key=repr)
        elif isinstance(o, Enum):
            return o.value
        elif hasattr(o, '__json__'):
            return o.__json__()
        else:
            return super().default(o)


def dumps(obj, encode=json.dumps, cls=JsonEncoder, **kwargs):
    """Serialize object as json string."""
    return encode(obj, cls=cls, **dict(_json_args, **kwargs))


def loads(s, decode=json.loads):
    """Deserialize json string."""
    return decode(s)
