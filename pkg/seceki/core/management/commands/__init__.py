"""Commands of the ``seceki`` management utility, one module per command."""
