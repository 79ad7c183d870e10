# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the promnl engine.

Every tool exposed over JSON-RPC is reachable through :meth:`Session.call`;
a few common ones have direct helpers.
"""
import itertools
import json

from ._promnl import PromnlError, _Session

__all__ = ["PromnlError", "RpcError", "Session"]


class RpcError(Exception):
    def __init__(self, code, message, data=None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message
        self.data = data


class Session:
    def __init__(self, catalog="builtin:gpu-fixture", prometheus_url="", bearer_token="",
                 fixtures="", validate=True):
        self._s = _Session(catalog=str(catalog), prometheus_url=prometheus_url,
                           bearer_token=bearer_token, fixtures=str(fixtures), validate=validate)
        self._ids = itertools.count(1)

    def call(self, method, **params):
        request = {"jsonrpc": "2.0", "id": next(self._ids), "method": method, "params": params}
        reply = json.loads(self._s.rpc(json.dumps(request)))
        if "error" in reply:
            err = reply["error"]
            raise RpcError(err["code"], err["message"], err.get("data"))
        return reply["result"]

    def raw(self, body):
        """Sends a raw JSON-RPC payload; returns the reply text or None."""
        return self._s.rpc(body)

    def tools(self):
        return [t["name"] for t in self.call("tools/list")["tools"]]

    def ask(self, question, now=None, execute=False):
        params = {"question": question, "execute": execute}
        if now is not None:
            params["now"] = int(now)
        return self.call("smart_discover", **params)

    def resolve_time(self, expression, now=None):
        params = {"expression": expression}
        if now is not None:
            params["now"] = int(now)
        return self.call("resolve_time_range", **params)

    def validate(self, query, repair=True):
        return self.call("validate_promql", query=query, repair=repair)

    def wait_ready(self):
        self._s.wait_ready()

    @property
    def gpu_ready(self):
        return self._s.gpu_ready

    @property
    def catalog_size(self):
        return self._s.catalog_size

    @property
    def warnings(self):
        return list(self._s.warnings)
