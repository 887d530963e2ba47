from flask import Flask
from .verification import verification_bp

def register_blueprints(app: Flask):
    """Register all API blueprints."""
    app.register_blueprint(verification_bp)
