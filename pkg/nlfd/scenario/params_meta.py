"""
Copyright (c) 2026 the nlfd-lab developers
All rights reserved.

This software may be modified and distributed under the terms
of the BSD license. See the LICENSE file for details.

Declarative scenario sections: each section class lists its keys as Param
class attributes, and ParamsBase parses a raw YAML mapping into it.

    >>> class GridSection(ParamsBase):
    >>>     dim = Param("dim", default=1)
    >>>     half_width = Param("half_width", required=True)
"""

from __future__ import absolute_import, unicode_literals

import copy

import six

from nlfd.exceptions import NlfdValidationException


class Param(object):
    """
    data descriptor for one key of a scenario section; the attribute name
    must equal `name`

    Defaults are shared between instances, keep them immutable.
    """

    def __init__(self, name, default=None, required=False, section=None, many=False):
        """
        :param name: str, key in the scenario mapping
        :param default: immutable value returned while unset
        :param required: bool, parsing reports a missing value
        :param section: ParamsBase subclass for nested mappings
        :param many: bool, value is a list of `section` mappings
        """
        self._name = name
        self._default = default
        self._required = required
        self._section = section
        self._many = many
        # per-descriptor storage slot on the instance
        self._mangled_name = "_%s__%s" % (type(self).__name__, name)

    name = property(lambda self: self._name)
    default = property(lambda self: self._default)
    required = property(lambda self: self._required)
    section = property(lambda self: self._section)
    many = property(lambda self: self._many)

    def __repr__(self):
        return "%s(%r)" % (type(self).__name__, self._name)

    def __get__(self, obj, objtype=None):
        if obj is None:
            return self
        return vars(obj).get(self._mangled_name, self._default)

    def __set__(self, obj, value):
        # ParamsBase.__setattr__ only accepts declared params
        vars(obj)[self._mangled_name] = value


class ParamsMeta(type):
    """
    collects the Param attributes of every section class into
    __params_dict__ and exposes them, parents included, on the class
    """

    def __new__(mcs, name, bases, namespace):
        declared = dict((key, value) for key, value in namespace.items()
                        if isinstance(value, Param))
        for key, param in declared.items():
            if key != param.name:
                raise TypeError("Mismatched param name: %s = %r" % (key, param))
        namespace["__params_dict__"] = declared
        return super(ParamsMeta, mcs).__new__(mcs, name, bases, namespace)

    def _declared(cls):
        # most derived class first
        return [vars(klass).get("__params_dict__", {}) for klass in cls.__mro__]

    @property
    def params_dict(cls):
        """
        {name: Param} over the whole hierarchy, subclasses overriding parents
        """
        merged = {}
        for declared in reversed(cls._declared()):
            merged.update(declared)
        return merged

    def get_param(cls, name):
        for declared in cls._declared():
            if name in declared:
                return declared[name]
        return None

    @property
    def params(cls):
        # pylint: disable=no-member
        return sorted(cls.params_dict.values(), key=lambda param: param.name)

    @property
    def required_params(cls):
        # pylint: disable=not-an-iterable
        return [param for param in cls.params if param.required]


@six.add_metaclass(ParamsMeta)
class ParamsBase(object):
    """
    one scenario section; subclasses declare Param attributes
    """

    def __init__(self, **kwargs):
        declared = type(self).params_dict
        unknown = sorted(set(kwargs).difference(declared))
        if unknown:
            raise NlfdValidationException(
                "Got unexpected params: " + ", ".join(repr(key) for key in unknown))
        for key, value in kwargs.items():
            declared[key].__set__(self, value)

    @classmethod
    def from_dict(cls, data, path=""):
        """
        Build a section from a raw mapping, recursing into nested sections.

        :return: (instance, list of error strings); the instance is None when
                 the mapping itself is unusable
        """
        errors = []
        prefix = path + "." if path else ""
        if data is None:
            data = {}
        if not isinstance(data, dict):
            return None, ["{}: expected a mapping, got {!r}".format(path or "top level", data)]
        pdict = cls.params_dict
        for name in sorted(set(data) - set(pdict)):
            errors.append("{}{}: unknown key".format(prefix, name))
        values = {}
        for name, param in pdict.items():
            raw = data.get(name)
            if raw is None:
                if param.required:
                    errors.append("{}{}: required".format(prefix, name))
                continue
            if param.section is not None and param.many:
                if not isinstance(raw, list):
                    errors.append("{}{}: expected a list".format(prefix, name))
                    continue
                items = []
                for index, item in enumerate(raw):
                    parsed, item_errors = param.section.from_dict(
                        item, "{}{}[{}]".format(prefix, name, index))
                    errors.extend(item_errors)
                    items.append(parsed)
                values[name] = items
            elif param.section is not None:
                parsed, section_errors = param.section.from_dict(raw, prefix + name)
                errors.extend(section_errors)
                values[name] = parsed
            else:
                values[name] = copy.deepcopy(raw)
        instance = cls(**values)
        for name, param in pdict.items():
            if param.section is not None and not param.many and name not in values \
                    and not param.required:
                instance.__setattr__(name, param.section())
        errors.extend(instance.validate(path))
        return instance, errors

    def validate(self, path=""):
        """
        semantic checks beyond the schema

        :return: list of error strings
        """
        return []

    def to_dict(self):
        result = {}
        for param in self.__class__.params:
            value = param.__get__(self)
            if value is None:
                continue
            if param.section is not None and param.many:
                value = [item.to_dict() for item in value]
            elif param.section is not None:
                value = value.to_dict()
            else:
                value = copy.deepcopy(value)
            result[param.name] = value
        return result

    def __eq__(self, other):
        return type(self) is type(other) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        params_repr = ", ".join(
            "{}={!r}".format(p.name, p.__get__(self)) for p in self.__class__.params
        )
        return "{}({})".format(self.__class__.__name__, params_repr)

    def __setattr__(self, name, value):
        param = type(self).get_param(name)
        if param is None:
            raise AttributeError("%s has no param %r" % (type(self).__name__, name))
        param.__set__(self, value)
