#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sliceguard/crypto/random.hpp"
#include "sliceguard/eps/messages.hpp"
#include "sliceguard/eps/nf.hpp"

using namespace sliceguard;
using namespace sliceguard::eps;

TEST_CASE("message codec round-trips every kind under random fields") {
  crypto::ChaChaRng rng(31);
  const MsgKind kinds[] = {
      MsgKind::AttachRequest,      MsgKind::AuthInfoRequest,
      MsgKind::AuthInfoAnswer,     MsgKind::UpdateLocationRequest,
      MsgKind::UpdateLocationAnswer, MsgKind::CreateSessionRequest,
      MsgKind::CreateSessionResponse, MsgKind::InitialContextSetup,
      MsgKind::AttachAccept,       MsgKind::AttachReject,
      MsgKind::GtpData,            MsgKind::EchoRequest,
      MsgKind::EchoReply,
  };
  auto random_token = [&rng](size_t max_len) {
    size_t len = rng.next_u64() % max_len;
    std::string s;
    for (size_t i = 0; i < len; ++i)
      s.push_back(char('!' + rng.next_u64() % 94));  // printable incl = , :
    return s;
  };
  for (MsgKind kind : kinds) {
    for (int trial = 0; trial < 20; ++trial) {
      EpsMessage m;
      m.kind = kind;
      int fields = int(rng.next_u64() % 6);
      for (int f = 0; f < fields; ++f)
        m.fields.emplace_back("f" + std::to_string(f), random_token(40));
      EpsMessage back = decode(encode(m));
      CHECK(back.kind == m.kind);
      CHECK(back.fields == m.fields);
    }
  }
}

TEST_CASE("identifiers appear verbatim in the wire bytes") {
  EpsMessage air = EpsMessage::make(
      MsgKind::AuthInfoRequest,
      {{"imsi", "001010123456789"},
       {"realm", "epc.mnc001.mcc001.3gppnetwork.org"},
       {"origin_host", "mme.epc.mnc001.mcc001.3gppnetwork.org"},
       {"dest_host", "hss.epc.mnc001.mcc001.3gppnetwork.org"}});
  Bytes wire = encode(air);
  std::string text(wire.begin(), wire.end());
  CHECK(text.find("001010123456789") != std::string::npos);
  CHECK(text.find("epc.mnc001.mcc001.3gppnetwork.org") != std::string::npos);
  CHECK(text.find("hss.epc.mnc001.mcc001.3gppnetwork.org") != std::string::npos);
}

TEST_CASE("decode rejects malformed wire data") {
  CHECK_THROWS_AS(decode(to_bytes("NOPE")), CodecError);
  CHECK_THROWS_AS(decode(to_bytes("EPS1 9:kind=Bogus,")), CodecError);
  CHECK_THROWS_AS(decode(to_bytes("EPS1 5:ab=cd")), CodecError);   // no comma
  CHECK_THROWS_AS(decode(to_bytes("EPS1 99:kind=GtpData,")), CodecError);
  CHECK_THROWS_AS(decode(to_bytes("EPS1 3:abc,")), CodecError);    // no '='
  CHECK_THROWS_AS(decode(to_bytes("EPS1 7:a=b,")), CodecError);    // bad length
}

TEST_CASE("subscriber records validate and round-trip as json-lines") {
  SubscriberRecord s;
  s.imsi = "001010123456789";
  s.key = from_hex("465b5ce8b199b49faa5f0a2ee238a6bc");
  s.apn = "oai.ipv4";
  s.realm = "epc.mnc001.mcc001.3gppnetwork.org";
  CHECK_NOTHROW(validate_subscriber(s));

  SubscriberRecord bad = s;
  bad.imsi = "12345";
  CHECK_THROWS_AS(validate_subscriber(bad), std::invalid_argument);
  bad.imsi = "00101012345678x";
  CHECK_THROWS_AS(validate_subscriber(bad), std::invalid_argument);

  std::string jsonl = serialize_subscribers({s, s});
  auto back = parse_subscribers(jsonl);
  REQUIRE(back.size() == 2);
  CHECK(back[0].imsi == s.imsi);
  CHECK(back[0].key == s.key);
  CHECK(back[0].realm == s.realm);
  CHECK_THROWS_AS(parse_subscribers("{not json\n"), std::invalid_argument);
}

TEST_CASE("spgw-u forwards by uplink teid and rejects unknown teids") {
  SpgwuApp spgwu;
  spgwu.install({"001010123456789", "12.1.1.2", 1000, 1001});

  EpsMessage up = EpsMessage::make(MsgKind::GtpData, {{"teid", "1000"},
                                                      {"dir", "ul"},
                                                      {"payload", "ping"},
                                                      {"echo_id", "7"}});
  EpsMessage down = spgwu.forward(up);
  CHECK(down.get("teid") == "1001");
  CHECK(down.get("payload") == "ping");  // byte-transparent echo
  CHECK(down.get("echo_id") == "7");

  EpsMessage stale = up;
  stale.set("teid", "4242");
  CHECK_THROWS_AS(spgwu.forward(stale), UnknownTeid);

  spgwu.release_all();
  CHECK_THROWS_AS(spgwu.forward(up), UnknownTeid);
}

TEST_CASE("hss answers map unknown subscribers to an error result") {
  struct FakeUnit : UnitServices {
    std::vector<std::pair<std::string, EpsMessage>> sent;
    SimTime service = 0;
    void send_message(const std::string& iface, const EpsMessage& msg,
                      SimTime occupancy) override {
      sent.emplace_back(iface, msg);
      service = occupancy;
    }
    SimTime now() const override { return 0; }
    const std::string& role_name() const override { return name; }
    std::string name = "hss";
  };

  NfSettings settings;
  HssApp hss(settings);
  SubscriberRecord s{"001010123456789",
                     from_hex("465b5ce8b199b49faa5f0a2ee238a6bc"), "oai.ipv4",
                     settings.realm};
  hss.provision(s);

  FakeUnit unit;
  EpsMessage air = EpsMessage::make(
      MsgKind::AuthInfoRequest,
      {{"imsi", s.imsi}, {"origin_host", "mme." + settings.realm}});
  hss.on_message(unit, "s6a", air);
  REQUIRE(unit.sent.size() == 1);
  CHECK(unit.sent[0].second.kind == MsgKind::AuthInfoAnswer);
  CHECK(unit.sent[0].second.get("result") == "ok");
  CHECK(unit.service == settings.hss_service);

  air.set("imsi", "999999999999999");
  hss.on_message(unit, "s6a", air);
  REQUIRE(unit.sent.size() == 2);
  CHECK(unit.sent[1].second.get("result") == "unknown-subscriber");
}
