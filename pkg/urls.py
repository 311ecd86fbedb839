"""
URL configuration for django_transport_polytopes.
"""

from django.urls import include, path

from django_transport_polytopes.api import urls as api_urls

app_name = "transport_polytopes"

urlpatterns = [
    path("api/", include(api_urls)),
]
