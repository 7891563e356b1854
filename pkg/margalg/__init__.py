import logging
from flask import Flask
from margalg.config import Config


def create_app():
    app = Flask(__name__)
    app.config.from_object(Config)

    logging.basicConfig(level=Config.LOG_LEVEL)

    from margalg.routes import main_bp
    app.register_blueprint(main_bp)

    return app
