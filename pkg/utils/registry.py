# Name -> callable lookup, used to pick model problems and experiments from
# configuration strings.


class Registry:
    """ """

    def __init__(self, name):
        """
        Args:
            name (str): the name of the registry
        """
        self._name = name
        self._registry = {}

    #### ************* BASE METHODS ************ ####

    def register(self, name=None):
        """
        Register a callable under the given name.
        Used as a decorator: @REGISTRY.register("slp")

        Args:
            name (str): key of the entry, defaults to the callable's __name__
        """
        if not (name is None or isinstance(name, str)):
            raise ValueError("Name must be a str.")

        def _register(fn):
            key = name if name is not None else fn.__name__
            if key in self._registry:
                raise ValueError(
                    "{} is already registered in {}".format(key, self._name)
                )
            self._registry[key] = fn
            return fn

        return _register

    def get(self, name):
        """
        Args:
            name (str):
        """
        if name not in self._registry:
            raise KeyError(
                "{} not registered in {}, choose from {}".format(
                    name, self._name, sorted(self._registry)
                )
            )
        return self._registry[name]

    def names(self):
        return sorted(self._registry)

    #### ************* INSTANCE METHODS ************ ####

    def __contains__(self, name):
        return name in self._registry
