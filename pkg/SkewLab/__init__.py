from flask import Flask

from SkewLab.utils.initialization import init_cli, init_logs

__version__ = "1.0.0"


def create_app(config="SkewLab.config.Config"):
    app = Flask(__name__)
    with app.app_context():
        app.config.from_object(config)

        app.VERSION = __version__

        init_logs(app)
        init_cli(app)

        return app
