import functools


def annotated(method):
    """
    Lets a registering method be used both bare (``@cli.command``) and with options
    (``@cli.command(name="...")``).
    """
    @functools.wraps(method)
    def annotated_inner(self, target=None, /, **kwargs):
        if target is not None:
            return method(self, target, **kwargs)

        def wrapper(real_target):
            return method(self, real_target, **kwargs)

        return wrapper

    return annotated_inner


def description(content: str):
    """
    A decorator for giving a command function a description
    :param content: The description of the command
    """
    if not isinstance(content, str):
        raise ValueError(f"description content must be type string, instead got {type(content)}")

    def description_inner(func):
        func.__description__ = content
        if getattr(func, "__boundcommand__", None):
            func.__boundcommand__.description = content

        return func

    return description_inner
