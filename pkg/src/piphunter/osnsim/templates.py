"""Handwritten fixture templates for the synthetic corpus generator.

Promo frames carry `{phrase}`, `{jargon}` and `{contact}` slots; category
phrases exist for zh/en (other languages embed the English phrase, which
mirrors the code-switching common in real promo posts).
"""

# Per-language promotional sentence frames.
PROMO_FRAMES = {
    "zh": [
        "{phrase}{jargon} 全网最低价 诚信第一 {contact}",
        "长期供应{phrase} {jargon}质量保证 欢迎咨询 {contact}",
        "{jargon}{phrase} 一手货源 秒发 详情联系 {contact}",
        "靠谱渠道 {phrase}{jargon} 安全送达 {contact}",
    ],
    "en": [
        "best price for {phrase} {jargon} dm now {contact}",
        "{phrase} available worldwide {jargon} fast delivery {contact}",
        "trusted seller {jargon} {phrase} discreet shipping {contact}",
        "top quality {phrase} {jargon} contact us {contact}",
    ],
    "ja": [
        "{phrase} 最安値で提供中 {jargon} 連絡はこちら {contact}",
        "高品質 {phrase} {jargon} 即日対応 {contact}",
        "{jargon} {phrase} 安心取引 詳細は {contact}",
    ],
    "th": [
        "{phrase} ราคาถูกที่สุด {jargon} ติดต่อ {contact}",
        "ของแท้ {phrase} {jargon} ส่งไว ทัก {contact}",
        "{jargon} {phrase} บริการดี สนใจทัก {contact}",
    ],
    "es": [
        "el mejor precio de {phrase} {jargon} escribe ya {contact}",
        "{phrase} disponible envio rapido {jargon} {contact}",
        "vendedor fiable {jargon} {phrase} contacta {contact}",
    ],
    "it": [
        "miglior prezzo per {phrase} {jargon} scrivici {contact}",
        "{phrase} disponibile consegna veloce {jargon} {contact}",
        "venditore affidabile {jargon} {phrase} contatta {contact}",
    ],
    "de": [
        "bester preis fuer {phrase} {jargon} melde dich {contact}",
        "{phrase} verfuegbar schneller versand {jargon} {contact}",
        "zuverlaessiger anbieter {jargon} {phrase} kontakt {contact}",
    ],
    "ru": [
        "лучшая цена на {phrase} {jargon} пиши {contact}",
        "{phrase} в наличии быстрая доставка {jargon} {contact}",
        "надежный продавец {jargon} {phrase} связь {contact}",
    ],
    "ko": [
        "{phrase} 최저가 제공 {jargon} 문의 {contact}",
        "고품질 {phrase} {jargon} 빠른 처리 {contact}",
        "{jargon} {phrase} 안전 거래 연락 {contact}",
    ],
    "fr": [
        "meilleur prix pour {phrase} {jargon} ecris nous {contact}",
        "{phrase} disponible livraison rapide {jargon} {contact}",
        "vendeur fiable {jargon} {phrase} contacte {contact}",
    ],
}

CATEGORY_PHRASES = {
    "Pornography": {
        "zh": ["线下预约 上门服务", "高端外围 资源丰富", "同城约啪 真实可靠", "伴游服务 颜值保证"],
        "en": [
            "adult content private show",
            "escort service outcall booking",
            "premium adult videos full set",
            "local hookup real profiles",
        ],
    },
    "Gambling": {
        "zh": ["百家乐 龙虎斗 实力平台", "体育投注 彩金优惠", "棋牌娱乐 充提秒到", "六合彩 精准预测"],
        "en": [
            "casino baccarat live tables",
            "sports betting bonus credit",
            "poker room instant payout",
            "lottery jackpot winning picks",
        ],
    },
    "IllegalDrug": {
        "zh": ["货源稳定 冰糖果 货到付款", "电子烟油 劲大持久", "叶类精品 现货直发", "糖果巧克力 高纯度"],
        "en": [
            "weed cart stock ready",
            "pills ecstasy party pack",
            "crystal quality pure batch",
            "cannabis edibles fresh drop",
        ],
    },
    "Surrogacy": {
        "zh": ["助孕套餐 包成功", "代妈招聘 补偿优厚", "试管婴儿 私立机构", "捐卵志愿 条件优越"],
        "en": [
            "surrogacy package guaranteed birth",
            "surrogate mother recruitment paid",
            "ivf clinic private arrangement",
            "egg donor program high pay",
        ],
    },
    "Harassment": {
        "zh": ["短信轰炸 电话轰炸 压力测试", "呼死你 强力催收", "人肉定位 查人找人", "恶意骚扰 代骂服务"],
        "en": [
            "sms bomber phone flood service",
            "call bombing pressure tool",
            "doxxing locate anyone fast",
            "harassment for hire revenge",
        ],
    },
    "MoneyLaundering": {
        "zh": ["跑分平台 日结佣金", "承兑汇率优 大额无忧", "四方支付 通道稳定", "车队收款 信誉保障"],
        "en": [
            "money mule daily commission",
            "crypto exchange clean funds",
            "payment channel settlement stable",
            "cash out service high volume",
        ],
    },
    "WeaponSales": {
        "zh": ["秃鹰配件 全套现货", "弩箭直发 威力强劲", "防身装备 军品直供", "气狗猎枪 诚信老店"],
        "en": [
            "gun parts full kit stock",
            "rifle scope tactical gear",
            "pistol brand new unused",
            "ammo crossbow fast ship",
        ],
    },
    "DataTheftLeakage": {
        "zh": ["开房记录 通话清单 精准查询", "银行流水 征信报告 代查", "股民数据 贷款数据 一手", "社工库查询 实时更新"],
        "en": [
            "database leak fresh dump",
            "bank logs fullz cvv",
            "hacked accounts credentials bulk",
            "personal records lookup service",
        ],
    },
    "ForgeryFakeDocuments": {
        "zh": ["证件办理 毕业证 驾驶证", "银行卡四件套 全新一手", "发票代开 真票验证", "护照签证 加急办理"],
        "en": [
            "fake id passport driver license",
            "diploma certificate replica fast",
            "counterfeit bills grade a",
            "cloned cards with pin",
        ],
    },
    "Crowdturfing": {
        "zh": ["刷粉丝 刷阅读 快速涨量", "点赞评论 真人兵团", "投票刷票 专业团队", "排名优化 口碑营销"],
        "en": [
            "buy followers likes views",
            "vote manipulation real accounts",
            "review boosting five stars",
            "engagement farm trending push",
        ],
    },
    "Others": {
        "zh": ["灰产项目 一对一指导", "偏门暴利 带你上车", "特殊渠道 来人就教", "冷门生意 稳定收益"],
        "en": [
            "grey market side hustle",
            "underground profit method",
            "special channel easy money",
            "hidden business stable income",
        ],
    },
}

BENIGN_TEMPLATES = {
    "zh": [
        "今天的天气真不错，适合出去走走",
        "刚看完一部电影，剧情很感人",
        "周末和朋友去爬山，风景太美了",
        "新买的咖啡豆味道很香，推荐给大家",
        "最近在学做饭，今天的菜终于没有翻车",
    ],
    "en": [
        "lovely weather today going for a walk in the park",
        "just finished a great movie the plot was touching",
        "hiked with friends this weekend the views were amazing",
        "the new coffee beans smell wonderful highly recommend",
        "learning to cook and dinner finally turned out well",
    ],
    "ja": [
        "今日はいい天気なので散歩に行ってきます",
        "映画を見終わったところ、とても感動しました",
        "週末に友達と山に登って景色が最高でした",
        "新しいコーヒー豆の香りがよくておすすめです",
    ],
    "th": [
        "วันนี้อากาศดีมากออกไปเดินเล่นกันเถอะ",
        "เพิ่งดูหนังจบเนื้อเรื่องซึ้งมาก",
        "สุดสัปดาห์ไปปีนเขากับเพื่อนวิวสวยสุดๆ",
        "กาแฟถุงใหม่หอมมากแนะนำเลย",
    ],
    "es": [
        "hace un tiempo precioso hoy voy a pasear por el parque",
        "acabo de ver una pelicula muy emotiva",
        "subimos la montana el finde las vistas eran increibles",
        "el cafe nuevo huele genial lo recomiendo",
    ],
    "it": [
        "oggi il tempo e bellissimo vado a passeggiare al parco",
        "ho appena visto un film molto commovente",
        "weekend in montagna con gli amici panorami stupendi",
        "il caffe nuovo ha un profumo fantastico lo consiglio",
    ],
    "de": [
        "herrliches wetter heute ich gehe im park spazieren",
        "gerade einen tollen film gesehen sehr beruehrend",
        "am wochenende mit freunden gewandert tolle aussicht",
        "der neue kaffee duftet wunderbar sehr zu empfehlen",
    ],
    "ru": [
        "сегодня чудесная погода пойду гулять в парк",
        "только что посмотрел отличный фильм очень трогательный",
        "в выходные ходили в горы виды потрясающие",
        "новый кофе пахнет замечательно рекомендую",
    ],
    "ko": [
        "오늘 날씨가 좋아서 공원에 산책하러 갑니다",
        "방금 본 영화가 정말 감동적이었어요",
        "주말에 친구들과 등산했는데 경치가 최고였어요",
        "새로 산 원두 향이 너무 좋아서 추천합니다",
    ],
    "fr": [
        "il fait tres beau aujourd'hui je vais me promener au parc",
        "je viens de voir un film tres emouvant",
        "randonnee avec des amis ce weekend vues magnifiques",
        "le nouveau cafe sent tres bon je le recommande",
    ],
}

BENIGN_HASHTAGS = [
    "travel", "coffee", "hiking", "movies", "foodie", "sunset", "photography",
    "weekend", "music", "nature", "fitness", "art", "books", "friends",
]

# Trending tags PIPs also abuse for reach.
POPULAR_TAGS = ["WorldCup", "MidAutumn", "trending", "viral", "news"]

# Table-1-shaped default mixes.
CATEGORY_MIX = {
    "Pornography": 0.4447,
    "IllegalDrug": 0.1145,
    "Gambling": 0.0950,
    "MoneyLaundering": 0.0896,
    "DataTheftLeakage": 0.0885,
    "Crowdturfing": 0.0510,
    "Harassment": 0.0408,
    "WeaponSales": 0.0250,
    "ForgeryFakeDocuments": 0.0228,
    "Surrogacy": 0.0150,
    "Others": 0.0131,
}

LANGUAGE_MIX = {
    "en": 0.4065,
    "zh": 0.3548,
    "ja": 0.0892,
    "th": 0.0264,
    "it": 0.0259,
    "de": 0.0235,
    "es": 0.0215,
    "ru": 0.0181,
    "ko": 0.0175,
    "fr": 0.0165,
}

# Jargon terms planted per category (surface forms from the bundled lexicon).
CATEGORY_JARGON = {
    "IllegalDrug": ["叶子", "飞叶子", "蓝精灵", "燃料", "机长", "农夫"],
    "Pornography": ["鲍鱼", "呦呦"],
    "DataTheftLeakage": ["四件套"],
    "MoneyLaundering": ["跑分", "渔夫", "船长"],
    "WeaponSales": ["黄河"],
    "Gambling": ["海螺"],
}
